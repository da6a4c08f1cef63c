//! Dense complex linear algebra shared by every module: Hermitian
//! eigendecomposition with fixed ordering and phase, Kronecker products,
//! embedding of local operators into product spaces, and exponentials of
//! Hermitian matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M − M†‖_F / max(‖M‖_F, tiny)`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    frobenius(&(m - m.adjoint())) / scale
}

pub fn ensure_hermitian(m: &CMatrix, rel_tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let deviation = hermitian_deviation(m);
    if deviation > rel_tol {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector (column of `vectors`) has its
/// largest-magnitude component real and positive; among components of equal
/// magnitude (to 1e-12 relative) the first one is used.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V · diag(f(E)) · V†`.
    pub fn apply_fn<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let d = self.dim();
        let mut scaled = self.vectors.clone();
        for (k, &e) in self.values.iter().enumerate() {
            let fk = f(e);
            for r in 0..d {
                scaled[(r, k)] *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i H t)`, with `t` in ns.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.apply_fn(|e| Complex64::from_polar(1.0, -e * t))
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(real)
    }

    /// Component of `exp(-iHt)` between two vectors: `⟨f| exp(-iHt) |i⟩`.
    pub fn amplitude(&self, final_state: &CVector, initial: &CVector, t: f64) -> Complex64 {
        let fi = self.vectors.adjoint() * final_state;
        let ci = self.vectors.adjoint() * initial;
        fi.iter()
            .zip(ci.iter())
            .zip(&self.values)
            .map(|((f, c), &e)| f.conj() * c * Complex64::from_polar(1.0, -e * t))
            .sum()
    }
}

pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    ensure_hermitian(m, 1e-10)?;
    let d = m.nrows();
    if d == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let decomposition = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let mut v = decomposition.eigenvectors.column(k).into_owned();
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }
    Ok(HermitianEigen { values, vectors })
}

fn fix_phase(v: &mut CVector) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = real(v[pivot].re);
}

/// Strides of a row-major product basis: the first factor varies slowest.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

pub fn product_index(labels: &[usize], dims: &[usize]) -> Result<usize> {
    if labels.len() != dims.len() || labels.iter().zip(dims).any(|(l, d)| l >= d) {
        return Err(Error::UnknownLabel(labels.to_vec()));
    }
    Ok(labels
        .iter()
        .zip(strides(dims))
        .map(|(l, s)| l * s)
        .sum())
}

pub fn product_labels(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut labels = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        labels[k] = index % dims[k];
        index /= dims[k];
    }
    labels
}

/// Embeds a single-factor operator acting on factor `site` of the product space.
pub fn embed_local(op: &CMatrix, site: usize, dims: &[usize]) -> CMatrix {
    dims.iter().enumerate().fold(identity(1), |acc, (k, &d)| {
        if k == site {
            kron(&acc, op)
        } else {
            kron(&acc, &identity(d))
        }
    })
}

/// Embeds an operator on the ordered pair of factors `(i, j)` (`i != j`).
///
/// `op` acts on `d_i · d_j` with `i` as the slow index, regardless of whether
/// `i < j`.
pub fn embed_pair(op: &CMatrix, i: usize, j: usize, dims: &[usize]) -> CMatrix {
    assert!(i != j, "embed_pair needs two distinct factors");
    let total: usize = dims.iter().product();
    let (di, dj) = (dims[i], dims[j]);
    debug_assert_eq!(op.nrows(), di * dj);
    let mut out = CMatrix::zeros(total, total);
    for row in 0..total {
        let rl = product_labels(row, dims);
        let local_row = rl[i] * dj + rl[j];
        for col_local in 0..di * dj {
            let value = op[(local_row, col_local)];
            if value == ZERO {
                continue;
            }
            let mut cl = rl.clone();
            cl[i] = col_local / dj;
            cl[j] = col_local % dj;
            let col = product_index(&cl, dims).expect("labels within range");
            out[(row, col)] += value;
        }
    }
    out
}

/// Re-expresses an operator on `(j ⊗ i)` as an operator on `(i ⊗ j)`.
pub fn swap_factors(op: &CMatrix, dj: usize, di: usize) -> CMatrix {
    let n = di * dj;
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        let (rj, ri) = (r / di, r % di);
        for c in 0..n {
            let (cj, ci) = (c / di, c % di);
            out[(ri * dj + rj, ci * dj + cj)] = op[(r, c)];
        }
    }
    out
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// `W† · M · W`.
pub fn conjugate_by(m: &CMatrix, w: &CMatrix) -> CMatrix {
    w.adjoint() * m * w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    #[test]
    fn eigh_orders_and_fixes_phase() {
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), -I, I, real(1.0)]);
        let eig = eigh(&m).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        for col in 0..2 {
            let v = eig.vectors.column(col);
            let pivot = v.iter().position(|z| z.norm() >= 0.7).unwrap();
            assert!(v[pivot].im.abs() < 1e-15 && v[pivot].re > 0.0);
        }
        assert!(frobenius(&(eig.reconstruct() - m)) < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn propagator_of_pauli_x() {
        let eig = eigh(&pauli_x()).unwrap();
        let t = 0.37;
        let u = eig.propagator(t);
        assert!((u[(0, 0)] - real(t.cos())).norm() < 1e-14);
        assert!((u[(0, 1)] - (-I * t.sin())).norm() < 1e-14);
    }

    #[test]
    fn product_index_round_trip() {
        let dims = [3, 2, 4];
        for idx in 0..24 {
            let labels = product_labels(idx, &dims);
            assert_eq!(product_index(&labels, &dims).unwrap(), idx);
        }
        assert!(product_index(&[3, 0, 0], &dims).is_err());
    }

    #[test]
    fn embed_pair_matches_kron_for_adjacent_sites() {
        let a = pauli_x();
        let b = CMatrix::from_row_slice(3, 3, &[
            real(1.0), real(2.0), ZERO,
            real(2.0), ZERO, I,
            ZERO, -I, real(-1.0),
        ]);
        let op = kron(&a, &b);
        let dims = [2, 3, 2];
        let direct = kron(&op, &identity(2));
        assert!(frobenius(&(embed_pair(&op, 0, 1, &dims) - &direct)) < 1e-15);
        // reversed order: op on (1, 0) is b ⊗ a
        let rev = kron(&b, &a);
        assert!(frobenius(&(embed_pair(&rev, 1, 0, &dims) - &direct)) < 1e-15);
        assert!(frobenius(&(swap_factors(&rev, 3, 2) - &op)) < 1e-15);
    }

    #[test]
    fn spectral_norm_of_diag() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![real(0.5), real(-3.0)]));
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-14);
    }
}
