use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Vertex-indexed nonnegative integers, in the quiver's vertex order.
///
/// Also used for rank sequences, which carry the same shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionVector(pub Vec<usize>);

impl DimensionVector {
    pub fn zeros(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Parses `"v1:n1,v2:n2,..."`; every vertex must appear exactly once.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Self> {
        let mut entries: Vec<Option<usize>> = vec![None; quiver.vertex_count()];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `vertex:value`, got `{item}`")))?;
            let x = quiver.vertex_index(name.trim())?;
            let v: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad nonnegative integer in `{item}`")))?;
            if entries[x].replace(v).is_some() {
                return Err(Error::Duplicate(name.trim().into()));
            }
        }
        let missing: Vec<&str> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_none())
            .map(|(x, _)| quiver.vertex_name(x))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Parse(format!("no value given for vertices {missing:?}")));
        }
        Ok(DimensionVector(entries.into_iter().map(Option::unwrap).collect()))
    }

    pub fn check_domain(&self, quiver: &Quiver) -> Result<()> {
        if self.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "vector has {} entries for {} vertices",
                self.len(),
                quiver.vertex_count()
            )));
        }
        Ok(())
    }

    /// `"v1:n1,v2:n2"` in vertex order.
    pub fn format(&self, quiver: &Quiver) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(x, v)| format!("{}:{v}", quiver.vertex_name(x)))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self, quiver: &Quiver) -> serde_json::Value {
        let map = self
            .0
            .iter()
            .enumerate()
            .map(|(x, &v)| (quiver.vertex_name(x).to_string(), serde_json::Value::from(v)))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }

    pub fn from_json(quiver: &Quiver, value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Malformed("dimension vector must be an object".into()))?;
        let mut entries = vec![None; quiver.vertex_count()];
        for (name, v) in obj {
            let x = quiver.vertex_index(name)?;
            let v = v
                .as_u64()
                .ok_or_else(|| Error::Malformed(format!("bad dimension at `{name}`")))?;
            entries[x] = Some(v as usize);
        }
        entries
            .into_iter()
            .enumerate()
            .map(|(x, e)| {
                e.ok_or_else(|| {
                    Error::Malformed(format!("missing dimension at `{}`", quiver.vertex_name(x)))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(DimensionVector)
    }

    /// Coordinatewise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Index<usize> for DimensionVector {
    type Output = usize;
    fn index(&self, x: usize) -> &usize {
        &self.0[x]
    }
}

impl IndexMut<usize> for DimensionVector {
    fn index_mut(&mut self, x: usize) -> &mut usize {
        &mut self.0[x]
    }
}

impl From<Vec<usize>> for DimensionVector {
    fn from(v: Vec<usize>) -> Self {
        DimensionVector(v)
    }
}
