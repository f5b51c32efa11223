//! Sparse polynomials with rational coefficients in the entries of the
//! generic arrow matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, Field};
use crate::quiver::{DimensionVector, Quiver, Representation};

/// Entry `(row, col)` of the matrix of an arrow, 0-based, rows indexed by head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub arrow: usize,
    pub row: usize,
    pub col: usize,
}

impl Var {
    pub fn new(arrow: usize, row: usize, col: usize) -> Self {
        Var { arrow, row, col }
    }

    /// `x_<arrow id>_<row>_<col>` with 1-based indices.
    pub fn name(&self, quiver: &Quiver) -> String {
        format!("x_{}_{}_{}", quiver.arrow(self.arrow).id, self.row + 1, self.col + 1)
    }

    /// Inverse of [`Var::name`]. Arrow ids may themselves contain underscores.
    pub fn parse(quiver: &Quiver, name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad variable name `{name}`"));
        let rest = name.strip_prefix("x_").ok_or_else(bad)?;
        let (rest, col) = rest.rsplit_once('_').ok_or_else(bad)?;
        let (arrow, row) = rest.rsplit_once('_').ok_or_else(bad)?;
        let row: usize = row.parse().map_err(|_| bad())?;
        let col: usize = col.parse().map_err(|_| bad())?;
        let a = quiver.arrow_index(arrow)?;
        if row == 0 || col == 0 {
            return Err(bad());
        }
        Ok(Var { arrow: a, row: row - 1, col: col - 1 })
    }

    pub fn in_shape(&self, quiver: &Quiver, d: &DimensionVector) -> bool {
        let a = quiver.arrow(self.arrow);
        self.row < d[a.head] && self.col < d[a.tail]
    }
}

/// A multiset of variables, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_vars(mut vars: Vec<Var>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn exponent(&self, v: Var) -> usize {
        self.0.iter().filter(|&&w| w == v).count()
    }

    /// Removes one copy of `v`; the caller checks that `v` occurs.
    fn without_one(&self, v: Var) -> Self {
        let mut vars = self.0.clone();
        let pos = vars.iter().position(|&w| w == v).expect("variable occurs");
        vars.remove(pos);
        Monomial(vars)
    }

    /// Runs of equal variables as `(var, exponent)`.
    pub fn powers(&self) -> Vec<(Var, usize)> {
        let mut out: Vec<(Var, usize)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, e)) if *w == v => *e += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

/// Sparse polynomial over the rationals; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(BigRational::one(), Monomial(vec![v]))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Polynomial::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.without_one(v), c * BigRational::from_integer(e.into()));
            }
        }
        out
    }

    /// Replaces every variable by a polynomial.
    pub fn substitute(&self, image: &dyn Fn(Var) -> Polynomial) -> Self {
        let mut cache: BTreeMap<Var, Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone());
            for (v, e) in m.powers() {
                let p = cache.entry(v).or_insert_with(|| image(v));
                acc = acc.mul(&p.pow(e));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Replaces variables by variables (a relabelling, not a substitution of values).
    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::from_vars(m.0.iter().map(|&v| f(v)).collect()), c.clone());
        }
        out
    }

    /// Scales so the leading coefficient is 1; used to compare up to a unit.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Scales so the leading coefficient is positive.
    pub fn sign_normalized(&self) -> Self {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn evaluate<F: Field>(&self, m: &Representation<F>) -> Result<F::Elem> {
        let f = m.field();
        let mut acc = f.zero();
        for (mono, c) in &self.terms {
            let mut t = f.from_rational(c)?;
            for v in &mono.0 {
                let mat = m.matrix(v.arrow);
                if v.row >= mat.rows() || v.col >= mat.cols() {
                    return Err(Error::DimensionMismatch(format!(
                        "variable ({}, {}, {}) outside a {}x{} matrix",
                        v.arrow,
                        v.row + 1,
                        v.col + 1,
                        mat.rows(),
                        mat.cols()
                    )));
                }
                t = f.mul(&t, mat.get(v.row, v.col));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Text with variables written `x_<arrow>_<row>_<col>`; monomials in
    /// increasing order.
    pub fn display(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let factors: Vec<String> = m
                .powers()
                .into_iter()
                .map(|(v, e)| if e == 1 { v.name(quiver) } else { format!("{}^{e}", v.name(quiver)) })
                .collect();
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    let _ = write!(out, "{}*", format_rational(&abs));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Parses sums of products of rational constants and variables, with
    /// `^` for powers and parentheses.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Self> {
        let mut p = Parser { quiver, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("unexpected input at byte {} of `{text}`", p.pos)));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    quiver: &'a Quiver,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.take_while(|b| b.is_ascii_digit());
            let e: usize = digits.parse().map_err(|_| self.err("expected an exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && pred(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let mut num = self.take_while(|b| b.is_ascii_digit());
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    num.push('/');
                    num.push_str(&self.take_while(|b| b.is_ascii_digit()));
                }
                Ok(Polynomial::constant(parse_rational(&num)?))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let name = self.take_while(|b| !b.is_ascii_whitespace() && !b"+-*^()/".contains(&b));
                Ok(Polynomial::var(Var::parse(self.quiver, &name)?))
            }
            _ => Err(self.err("expected a constant, variable or `(`")),
        }
    }
}

/// All entries of all arrow matrices, arrow by arrow, row-major.
pub fn ambient_variables(quiver: &Quiver, d: &DimensionVector) -> Vec<Var> {
    quiver
        .arrows()
        .iter()
        .enumerate()
        .flat_map(|(a, arr)| {
            let cols = d[arr.tail];
            (0..d[arr.head]).flat_map(move |i| (0..cols).map(move |j| Var::new(a, i, j)))
        })
        .collect()
}
