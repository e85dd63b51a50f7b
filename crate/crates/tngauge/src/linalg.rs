//! Dense factorizations on matricized tensors: SVD, QR, Hermitian square
//! roots, and the normalized trace distance.
//!
//! Tensors are flattened to matrices over a caller-chosen row index group
//! (see [`LabeledTensor::matricize`]); the factors come back as labeled
//! tensors carrying fresh bond indices for the inner dimension.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::index::Index;
use crate::tensor::LabeledTensor;

/// Relative eigenvalue floor below which a pseudo-inverse treats a direction
/// as null. Machine-precision noise floor for double precision.
pub const DEFAULT_PINV_CUTOFF: f64 = 1e-12;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative tolerance for clamping negative eigenvalue noise of PSD matrices.
pub const PSD_TOL: f64 = 1e-12;

pub(crate) fn nd_to_na(a: &Array2<C64>) -> DMatrix<C64> {
    DMatrix::from_row_iterator(a.nrows(), a.ncols(), a.iter().copied())
}

pub(crate) fn na_to_nd(m: &DMatrix<C64>) -> Array2<C64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

fn check_finite(mat: &Array2<C64>, what: &str) -> Result<()> {
    if mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalError(format!("non-finite data in {what}")))
    }
}

/// Truncation controls shared by the SVD-based operations.
#[derive(Clone, Copy, Debug, Default)]
pub struct SvdOptions {
    pub max_rank: Option<usize>,
    /// Relative singular-value threshold: values below `cutoff * s_max` are
    /// dropped.
    pub cutoff: Option<f64>,
}

/// Outcome of a truncated SVD, as labeled tensors: `u * s * v` reconstructs
/// the input up to the discarded weight.
pub struct TensorSvd {
    /// Row indices followed by the fresh left bond index.
    pub u: LabeledTensor,
    /// Diagonal (left bond, right bond) tensor of singular values, descending.
    pub s: LabeledTensor,
    /// Fresh right bond index followed by the column indices.
    pub v: LabeledTensor,
    /// Singular values kept, descending.
    pub values: Vec<f64>,
    /// sqrt(sum of discarded s^2) / sqrt(sum of all s^2).
    pub truncation_error: f64,
}

/// Thin SVD of a tensor flattened over `rows`.
pub fn svd(t: &LabeledTensor, rows: &[Index], opts: SvdOptions) -> Result<TensorSvd> {
    let (mat, row_ix, col_ix) = t.matricize(rows)?;
    check_finite(&mat, "svd")?;
    let na = nd_to_na(&mat);
    let svd = na.svd(true, true);
    let u = svd.u.ok_or_else(|| Error::NumericalError("svd did not return U".into()))?;
    let vt = svd.v_t.ok_or_else(|| Error::NumericalError("svd did not return V".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return Err(Error::DegenerateInput("svd of a zero matrix".into()));
    }

    let total_weight: f64 = sv.iter().map(|s| s * s).sum();
    let mut rank = sv.len();
    if let Some(c) = opts.cutoff {
        rank = sv.iter().take_while(|&&s| s >= c * smax).count().max(1);
    }
    if let Some(m) = opts.max_rank {
        rank = rank.min(m.max(1));
    }
    let kept: Vec<f64> = sv[..rank].to_vec();
    let kept_weight: f64 = kept.iter().map(|s| s * s).sum();
    let truncation_error = ((total_weight - kept_weight).max(0.0) / total_weight).sqrt();

    let left = Index::bond(rank);
    let right = Index::bond(rank);
    let mut u_nd = Array2::zeros((mat.nrows(), rank));
    for (k, &src) in order[..rank].iter().enumerate() {
        for i in 0..mat.nrows() {
            u_nd[(i, k)] = u[(i, src)];
        }
    }
    let mut v_nd = Array2::zeros((rank, mat.ncols()));
    for (k, &src) in order[..rank].iter().enumerate() {
        for j in 0..mat.ncols() {
            v_nd[(k, j)] = vt[(src, j)];
        }
    }
    let u_t = {
        let mut ix = row_ix.clone();
        ix.push(left);
        LabeledTensor::from_matricized(u_nd, &row_ix, &[left])?.permuted(&ix)?
    };
    let s_t = LabeledTensor::diag_matrix(left, right, &kept);
    let v_t = LabeledTensor::from_matricized(v_nd, &[right], &col_ix)?;
    Ok(TensorSvd { u: u_t, s: s_t, v: v_t, values: kept, truncation_error })
}

/// Thin QR of a tensor flattened over `rows`: returns (Q, R) with
/// Q isometric over the fresh inner bond and Q * R reconstructing the input.
pub fn qr(t: &LabeledTensor, rows: &[Index]) -> Result<(LabeledTensor, LabeledTensor)> {
    let (mat, row_ix, col_ix) = t.matricize(rows)?;
    check_finite(&mat, "qr")?;
    let qr = nd_to_na(&mat).qr();
    let q = qr.q();
    let r = qr.r();
    let inner = Index::bond(q.ncols());
    let q_t = LabeledTensor::from_matricized(na_to_nd(&q), &row_ix, &[inner])?;
    let r_t = LabeledTensor::from_matricized(na_to_nd(&r), &[inner], &col_ix)?;
    Ok((q_t, r_t))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// descending and a deterministic eigenvector phase (largest-magnitude
/// component made real positive). Returns eigenvalues and the matrix whose
/// columns are eigenvectors.
pub fn hermitian_eig(mat: &Array2<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    check_finite(mat, "eigendecomposition")?;
    if mat.nrows() != mat.ncols() {
        return Err(Error::DimensionMismatch("eigendecomposition needs a square matrix".into()));
    }
    let m = nd_to_na(mat);
    let norm = m.norm();
    let dev = (&m - m.adjoint()).norm();
    if norm > 0.0 && dev > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian(dev / norm));
    }
    // symmetrize away floating-point noise before factorizing
    let sym = (&m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut best = 0;
        let mut best_mag = 0.0;
        for (i, z) in col.iter().enumerate() {
            let mag = z.norm();
            if mag > best_mag + 1e-300 {
                best_mag = mag;
                best = i;
            }
        }
        let phase = if best_mag > 0.0 { col[best] / C64::new(best_mag, 0.0) } else { C64::new(1.0, 0.0) };
        let fix = phase.conj();
        for i in 0..n {
            vecs[(i, k)] = col[i] * fix;
        }
    }
    Ok((vals, vecs))
}

/// Principal square root and pseudo-inverse square root of a Hermitian PSD
/// tensor flattened over `rows`.
///
/// `half` carries a fresh bond index `a` over the column space followed by
/// the column indices; `inv_half` carries the column indices followed by the
/// same `a`, so `half` absorbed into a network is undone by `inv_half`.
/// Eigenvalues below `pinv_cutoff` (relative to the largest) are
/// pseudo-inverted to zero; negative eigenvalues within [`PSD_TOL`] are
/// clamped to zero, anything more negative is an error.
pub fn sqrt_and_inv_sqrt(
    t: &LabeledTensor,
    rows: &[Index],
    pinv_cutoff: f64,
) -> Result<(LabeledTensor, LabeledTensor)> {
    let (mat, _row_ix, col_ix) = t.matricize(rows)?;
    if mat.nrows() != mat.ncols() {
        return Err(Error::DimensionMismatch("square root needs a square matrix view".into()));
    }
    let (vals, vecs) = hermitian_eig(&mat)?;
    let vmax = vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut clamped = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < -PSD_TOL * vmax.max(1e-300) {
            return Err(Error::NotPositive(if vmax > 0.0 { v / vmax } else { v }));
        }
        clamped.push(v.max(0.0));
    }
    let n = vals.len();
    let mut half = DMatrix::<C64>::zeros(n, n);
    let mut inv = DMatrix::<C64>::zeros(n, n);
    for (k, &v) in clamped.iter().enumerate() {
        let s = v.sqrt();
        let si = if v > pinv_cutoff * vmax && v > 0.0 { 1.0 / s } else { 0.0 };
        for i in 0..n {
            for j in 0..n {
                let w = vecs[(i, k)] * vecs[(j, k)].conj();
                half[(i, j)] += w * C64::new(s, 0.0);
                inv[(i, j)] += w * C64::new(si, 0.0);
            }
        }
    }
    let a = Index::bond(n);
    // half[a, c] followed by inv[c, a] composes to the retained-space
    // projector under plain index contraction (no conjugation involved).
    let half_t = LabeledTensor::from_matricized(na_to_nd(&half), &[a], &col_ix)?;
    let inv_t = LabeledTensor::from_matricized(na_to_nd(&inv), &col_ix, &[a])?;
    Ok((half_t, inv_t))
}

/// Trace norm (sum of singular values) of a matrix.
pub fn trace_norm(mat: &Array2<C64>) -> Result<f64> {
    check_finite(mat, "trace norm")?;
    let na = nd_to_na(mat);
    if na.nrows() == na.ncols() {
        let dev = (&na - na.adjoint()).norm();
        if dev <= 1e-13 * na.norm().max(1e-300) {
            // Hermitian fast path: trace norm is the sum of |eigenvalues|
            let sym = (&na + na.adjoint()).scale(0.5);
            let eig = nalgebra::SymmetricEigen::new(sym);
            return Ok(eig.eigenvalues.iter().map(|v| v.abs()).sum());
        }
    }
    Ok(na.singular_values().iter().sum())
}

/// `|| a/tr(a) - b/tr(b) ||_1`: the trace norm of the difference of
/// trace-normalized matrices. Scale invariant by construction.
pub fn normalized_trace_distance(a: &Array2<C64>, b: &Array2<C64>) -> Result<f64> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(
            "normalized trace distance needs square matrices of equal size".into(),
        ));
    }
    let tra: C64 = (0..a.nrows()).map(|i| a[(i, i)]).sum();
    let trb: C64 = (0..b.nrows()).map(|i| b[(i, i)]).sum();
    if tra.norm() == 0.0 || trb.norm() == 0.0 {
        return Err(Error::DegenerateInput("zero trace in normalized trace distance".into()));
    }
    let diff = a.mapv(|z| z / tra) - b.mapv(|z| z / trb);
    trace_norm(&diff)
}

/// Normalized trace distance between two matrix tensors over matching
/// (row, col) index pairs; `b`'s indices may be listed in either order.
pub fn normalized_trace_distance_tensors(a: &LabeledTensor, b: &LabeledTensor) -> Result<f64> {
    if a.order() != 2 || b.order() != 2 {
        return Err(Error::DimensionMismatch("expected matrix tensors".into()));
    }
    let (am, _, _) = a.matricize(&[a.indices()[0]])?;
    let bp = b.permuted(a.indices())?;
    let (bm, _, _) = bp.matricize(&[a.indices()[0]])?;
    normalized_trace_distance(&am, &bm)
}
