//! Dense complex tensors with labeled axes.
//!
//! A [`LabeledTensor`] owns a dense array of `Complex64` in row-major order
//! over its declared index order. Axes are identified by [`Index`] values, so
//! contraction never depends on axis positions: two tensors contract over all
//! indices whose id and conjugation level match. The result of
//! [`contract`] carries the symmetric difference of the two index sets, open
//! indices of the left operand first.

use ndarray::{ArrayD, Dimension, IxDyn};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::index::{Index, IndexKind};

#[derive(Clone, Debug)]
pub struct LabeledTensor {
    indices: Vec<Index>,
    data: ArrayD<C64>,
}

impl LabeledTensor {
    /// Builds a tensor from an index list and a flat row-major buffer.
    pub fn from_flat(indices: Vec<Index>, data: Vec<C64>) -> Result<Self> {
        let shape: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "data length {} does not match index dims (product {})",
                data.len(),
                len
            )));
        }
        let arr = ArrayD::from_shape_vec(IxDyn(&shape), data)
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        Self::from_array(indices, arr)
    }

    /// Wraps an existing array; the array is copied to row-major layout if
    /// needed. Fails on duplicate index keys or shape mismatch.
    pub fn from_array(indices: Vec<Index>, data: ArrayD<C64>) -> Result<Self> {
        let shape: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        if data.shape() != shape.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "array shape {:?} does not match index dims {:?}",
                data.shape(),
                shape
            )));
        }
        for (n, i) in indices.iter().enumerate() {
            for j in &indices[n + 1..] {
                if i.key() == j.key() {
                    return Err(Error::DimensionMismatch(format!(
                        "repeated index {:?} on a single tensor",
                        i
                    )));
                }
            }
        }
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().to_owned()
        };
        Ok(LabeledTensor { indices, data })
    }

    pub fn zeros(indices: Vec<Index>) -> Self {
        let shape: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        LabeledTensor { indices, data: ArrayD::zeros(IxDyn(&shape)) }
    }

    pub fn from_fn(indices: Vec<Index>, mut f: impl FnMut(&[usize]) -> C64) -> Self {
        let shape: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        let data = ArrayD::from_shape_fn(IxDyn(&shape), |ix| f(ix.slice()));
        LabeledTensor { indices, data }
    }

    /// Rank-0 tensor holding one scalar.
    pub fn scalar(value: C64) -> Self {
        LabeledTensor {
            indices: Vec::new(),
            data: ArrayD::from_elem(IxDyn(&[]), value),
        }
    }

    /// Identity matrix over a (row, col) index pair of equal dimension.
    pub fn identity_matrix(row: Index, col: Index) -> Self {
        assert_eq!(row.dim, col.dim, "identity needs square index pair");
        Self::from_fn(vec![row, col], |ix| {
            if ix[0] == ix[1] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        })
    }

    /// Diagonal matrix over a (row, col) index pair from real entries.
    pub fn diag_matrix(row: Index, col: Index, values: &[f64]) -> Self {
        assert_eq!(row.dim, col.dim, "diagonal needs square index pair");
        assert_eq!(row.dim, values.len());
        Self::from_fn(vec![row, col], |ix| {
            if ix[0] == ix[1] { C64::new(values[ix[0]], 0.0) } else { C64::new(0.0, 0.0) }
        })
    }

    /// Matrix tensor over a (row, col) index pair from an `ndarray` matrix.
    pub fn from_matrix(row: Index, col: Index, mat: ndarray::Array2<C64>) -> Self {
        assert_eq!(mat.shape(), [row.dim, col.dim]);
        LabeledTensor { indices: vec![row, col], data: mat.into_dyn() }
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn data(&self) -> &ArrayD<C64> {
        &self.data
    }

    /// Flat row-major view of the data.
    pub fn flat(&self) -> &[C64] {
        self.data.as_slice().expect("tensor data is always standard layout")
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// The scalar held by a rank-0 tensor.
    pub fn scalar_value(&self) -> Result<C64> {
        if !self.indices.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "tensor of order {} is not a scalar",
                self.order()
            )));
        }
        Ok(self.flat()[0])
    }

    pub fn has_index(&self, index: Index) -> bool {
        self.position(index).is_some()
    }

    pub fn position(&self, index: Index) -> Option<usize> {
        self.indices.iter().position(|i| i.key() == index.key())
    }

    pub fn norm(&self) -> f64 {
        self.flat().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.flat().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        LabeledTensor { indices: self.indices.clone(), data: self.data.mapv(|z| z * factor) }
    }

    /// Elementwise complex conjugate; indices unchanged.
    pub fn conj(&self) -> Self {
        LabeledTensor { indices: self.indices.clone(), data: self.data.mapv(|z| z.conj()) }
    }

    /// The bra copy used in norm networks: conjugated data, bond indices
    /// raised one conjugation level, site indices left shared.
    pub fn bra(&self) -> Self {
        let indices = self
            .indices
            .iter()
            .map(|&i| if i.kind == IndexKind::Bond { i.raised() } else { i })
            .collect();
        LabeledTensor { indices, data: self.data.mapv(|z| z.conj()) }
    }

    /// Replaces one index label by another of the same dimension.
    pub fn relabel(&self, from: Index, to: Index) -> Result<Self> {
        let pos = self.position(from).ok_or_else(|| {
            Error::DimensionMismatch(format!("index {:?} not on tensor", from))
        })?;
        if self.indices[pos].dim != to.dim {
            return Err(Error::DimensionMismatch(format!(
                "relabel {:?} -> {:?} changes dimension",
                from, to
            )));
        }
        let mut indices = self.indices.clone();
        indices[pos] = to;
        LabeledTensor { indices, data: self.data.clone() }.validated()
    }

    fn validated(self) -> Result<Self> {
        Self::from_array(self.indices, self.data)
    }

    /// Returns a copy with axes permuted into the order given by `order`,
    /// which must be a permutation of this tensor's indices.
    pub fn permuted(&self, order: &[Index]) -> Result<Self> {
        if order.len() != self.indices.len() {
            return Err(Error::DimensionMismatch(
                "permutation has wrong number of indices".into(),
            ));
        }
        let mut axes = Vec::with_capacity(order.len());
        for want in order {
            let pos = self.position(*want).ok_or_else(|| {
                Error::DimensionMismatch(format!("index {:?} not on tensor", want))
            })?;
            if axes.contains(&pos) {
                return Err(Error::DimensionMismatch("duplicate index in permutation".into()));
            }
            axes.push(pos);
        }
        let view = self.data.view().permuted_axes(IxDyn(&axes));
        let data = view.as_standard_layout().to_owned();
        Ok(LabeledTensor { indices: order.to_vec(), data })
    }

    /// Flattens to a matrix with the given row indices; the remaining indices
    /// (in tensor order) become columns. Returns the matrix together with the
    /// row and column index lists.
    pub fn matricize(&self, rows: &[Index]) -> Result<(ndarray::Array2<C64>, Vec<Index>, Vec<Index>)> {
        let mut row_list = Vec::with_capacity(rows.len());
        for r in rows {
            let pos = self.position(*r).ok_or_else(|| {
                Error::DimensionMismatch(format!("row index {:?} not on tensor", r))
            })?;
            row_list.push(self.indices[pos]);
        }
        let cols: Vec<Index> = self
            .indices
            .iter()
            .copied()
            .filter(|i| !row_list.iter().any(|r| r.key() == i.key()))
            .collect();
        let mut order = row_list.clone();
        order.extend_from_slice(&cols);
        let perm = self.permuted(&order)?;
        let m: usize = row_list.iter().map(|i| i.dim).product();
        let n: usize = cols.iter().map(|i| i.dim).product();
        let mat = perm
            .data
            .into_shape((m, n))
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        Ok((mat, row_list, cols))
    }

    /// Inverse of [`matricize`]: reshapes a matrix back into a tensor over
    /// `rows ++ cols`.
    pub fn from_matricized(
        mat: ndarray::Array2<C64>,
        rows: &[Index],
        cols: &[Index],
    ) -> Result<Self> {
        let mut indices = rows.to_vec();
        indices.extend_from_slice(cols);
        let shape: Vec<usize> = indices.iter().map(|i| i.dim).collect();
        let data = mat
            .into_shape(IxDyn(&shape))
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        Self::from_array(indices, data)
    }

    /// Sum over the diagonal of a square matrix tensor.
    pub fn matrix_trace(&self) -> Result<C64> {
        if self.order() != 2 || self.indices[0].dim != self.indices[1].dim {
            return Err(Error::DimensionMismatch("trace needs a square matrix tensor".into()));
        }
        let d = self.indices[0].dim;
        let flat = self.flat();
        Ok((0..d).map(|i| flat[i * d + i]).sum())
    }

    /// Elementwise sum; `other` may list its indices in any order.
    pub fn add(&self, other: &LabeledTensor) -> Result<Self> {
        let aligned = other.permuted(&self.indices)?;
        Ok(LabeledTensor {
            indices: self.indices.clone(),
            data: &self.data + &aligned.data,
        })
    }

    /// Largest elementwise deviation from `other`, aligning index orders.
    pub fn max_abs_diff(&self, other: &LabeledTensor) -> Result<f64> {
        let aligned = other.permuted(&self.indices)?;
        Ok(self
            .flat()
            .iter()
            .zip(aligned.flat())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}

/// Contracts two tensors over every index key they share.
///
/// The result carries the open indices of `a` followed by the open indices of
/// `b`; contracting over all indices yields a rank-0 tensor. Shared indices
/// with unequal dimensions are an error.
pub fn contract(a: &LabeledTensor, b: &LabeledTensor) -> Result<LabeledTensor> {
    let mut common_a: Vec<Index> = Vec::new();
    for ia in a.indices() {
        if let Some(pb) = b.position(*ia) {
            let ib = b.indices()[pb];
            if ia.dim != ib.dim {
                return Err(Error::DimensionMismatch(format!(
                    "shared index {:?} has dims {} and {}",
                    ia, ia.dim, ib.dim
                )));
            }
            common_a.push(*ia);
        }
    }
    let a_open: Vec<Index> = a
        .indices()
        .iter()
        .copied()
        .filter(|i| !common_a.iter().any(|c| c.key() == i.key()))
        .collect();
    let b_open: Vec<Index> = b
        .indices()
        .iter()
        .copied()
        .filter(|i| !common_a.iter().any(|c| c.key() == i.key()))
        .collect();

    let mut a_order = a_open.clone();
    a_order.extend_from_slice(&common_a);
    let mut b_order = common_a.clone();
    b_order.extend_from_slice(&b_open);

    let ap = a.permuted(&a_order)?;
    let bp = b.permuted(&b_order)?;

    let m: usize = a_open.iter().map(|i| i.dim).product();
    let k: usize = common_a.iter().map(|i| i.dim).product();
    let n: usize = b_open.iter().map(|i| i.dim).product();

    let am = ap.data.into_shape((m, k)).map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    let bm = bp.data.into_shape((k, n)).map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    let cm = am.dot(&bm);

    let mut out = a_open;
    out.extend_from_slice(&b_open);
    let shape: Vec<usize> = out.iter().map(|i| i.dim).collect();
    let data = cm.into_shape(IxDyn(&shape)).map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    Ok(LabeledTensor { indices: out, data })
}

/// Contracts a chain of tensors left to right.
pub fn contract_all(tensors: &[&LabeledTensor]) -> Result<LabeledTensor> {
    let mut iter = tensors.iter();
    let first = iter.next().ok_or_else(|| {
        Error::DimensionMismatch("contract_all needs at least one tensor".into())
    })?;
    let mut acc = (*first).clone();
    for t in iter {
        acc = contract(&acc, t)?;
    }
    Ok(acc)
}
