//! Integer affine maps `x -> Lx + b` on the coroot lattice.

use std::fmt;

/// An affine transformation with integer linear part and integer translation.
///
/// The linear part is stored row-major. Equality and hashing are coordinate
/// equality, which is what the enumeration engine uses to deduplicate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    dim: usize,
    linear: Vec<i64>,
    translation: Vec<i64>,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        let mut linear = vec![0; dim * dim];
        for i in 0..dim {
            linear[i * dim + i] = 1;
        }
        AffineMap {
            dim,
            linear,
            translation: vec![0; dim],
        }
    }

    /// Builds a map from a row-major linear part and a translation.
    ///
    /// Panics if the sizes are inconsistent.
    pub fn new(dim: usize, linear: Vec<i64>, translation: Vec<i64>) -> Self {
        assert_eq!(linear.len(), dim * dim, "linear part must be dim x dim");
        assert_eq!(translation.len(), dim, "translation must have length dim");
        AffineMap {
            dim,
            linear,
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn linear_entry(&self, row: usize, col: usize) -> i64 {
        self.linear[row * self.dim + col]
    }

    pub fn linear_rows(&self) -> Vec<Vec<i64>> {
        self.linear
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity(self.dim)
    }

    /// Composition `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut linear = vec![0i64; n * n];
        let mut translation = self.translation.clone();
        for i in 0..n {
            for k in 0..n {
                let a = self.linear[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    linear[i * n + j] += a * other.linear[k * n + j];
                }
                translation[i] += a * other.translation[k];
            }
        }
        AffineMap {
            dim: n,
            linear,
            translation,
        }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.translation[i] + (0..n).map(|j| self.linear[i * n + j] * x[j]).sum::<i64>()
            })
            .collect()
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AffineMap {{ linear: {:?}, translation: {:?} }}",
            self.linear_rows(),
            self.translation
        )
    }
}
