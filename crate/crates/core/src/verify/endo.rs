use crate::exactla::{Field, Matrix};
use crate::quiver::{Quiver, Representation};

/// `dim End(M)`: solutions `(phi_z)` of `phi_{head a} M_a = M_a phi_{tail a}`.
pub fn endomorphism_dim<F: Field>(quiver: &Quiver, m: &Representation<F>) -> usize {
    let f = m.field();
    let d = m.dims();
    let mut offsets = Vec::with_capacity(d.len());
    let mut unknowns = 0;
    for &k in d.entries() {
        offsets.push(unknowns);
        unknowns += k * k;
    }
    let equations: usize = quiver.arrows().iter().map(|a| d[a.head] * d[a.tail]).sum();
    let mut sys = Matrix::zeros(f, equations, unknowns);
    let mut row = 0;
    for (ai, a) in quiver.arrows().iter().enumerate() {
        let (h, t) = (a.head, a.tail);
        let x = m.matrix(ai);
        for i in 0..d[h] {
            for j in 0..d[t] {
                // sum_k phi_h[i][k] x[k][j] - sum_k x[i][k] phi_t[k][j]
                for k in 0..d[h] {
                    let col = offsets[h] + i * d[h] + k;
                    let v = f.add(sys.get(row, col), x.get(k, j));
                    sys.set(row, col, v);
                }
                for k in 0..d[t] {
                    let col = offsets[t] + k * d[t] + j;
                    let v = f.sub(sys.get(row, col), x.get(i, k));
                    sys.set(row, col, v);
                }
                row += 1;
            }
        }
    }
    unknowns - sys.rank()
}

/// Endomorphism algebra is the ground field.
pub fn is_schur<F: Field>(quiver: &Quiver, m: &Representation<F>) -> bool {
    endomorphism_dim(quiver, m) == 1
}
