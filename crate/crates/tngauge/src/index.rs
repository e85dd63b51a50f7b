//! Tensor index labels.
//!
//! Every tensor axis is identified by an [`Index`]. Two tensors contract over
//! an axis exactly when they carry an index with the same id *and* the same
//! conjugation level; the dimensions must then agree. Site (external) indices
//! are shared between a ket tensor and its bra copy, while bond indices of a
//! bra copy are raised to conjugation level 1 so that they pair with message
//! tensors rather than with the ket layer directly.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_INDEX_ID: AtomicU64 = AtomicU64::new(1);

/// Globally unique index label. Ids never influence numerics; they are only
/// identities, so the global counter does not perturb reproducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexId(pub u64);

impl IndexId {
    pub fn fresh() -> Self {
        IndexId(NEXT_INDEX_ID.fetch_add(1, Ordering::Relaxed))
    }
}

/// Whether an index is an external (site) index or an internal bond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexKind {
    Site,
    Bond,
}

/// A labeled tensor axis.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub id: IndexId,
    pub dim: usize,
    pub kind: IndexKind,
    /// 0 for ket copies, 1 for bra copies of the same logical index.
    pub conj: u8,
}

impl Index {
    pub fn new(dim: usize, kind: IndexKind) -> Self {
        assert!(dim >= 1, "index dimension must be at least 1");
        Index { id: IndexId::fresh(), dim, kind, conj: 0 }
    }

    pub fn site(dim: usize) -> Self {
        Self::new(dim, IndexKind::Site)
    }

    pub fn bond(dim: usize) -> Self {
        Self::new(dim, IndexKind::Bond)
    }

    /// The same logical index one conjugation level up (ket -> bra).
    pub fn raised(self) -> Self {
        Index { conj: self.conj + 1, ..self }
    }

    /// Identity used for contraction pairing: id plus conjugation level.
    pub fn key(self) -> (IndexId, u8) {
        (self.id, self.conj)
    }

    /// A fresh index with the same dimension and kind but a new id.
    pub fn fresh_like(self) -> Self {
        Index { id: IndexId::fresh(), ..self }
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            IndexKind::Site => "s",
            IndexKind::Bond => "b",
        };
        write!(f, "{}{}|{}", k, self.id.0, self.dim)?;
        if self.conj > 0 {
            write!(f, "'")?;
        }
        Ok(())
    }
}
