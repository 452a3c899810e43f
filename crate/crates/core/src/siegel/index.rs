use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-integral matrix `[[n, r/2], [r/2, m]]` indexing a Fourier coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiegelIndex {
    pub n: i64,
    pub r: i64,
    pub m: i64,
}

impl SiegelIndex {
    pub const fn new(n: i64, r: i64, m: i64) -> Self {
        SiegelIndex { n, r, m }
    }

    /// `4nm - r^2`, four times the determinant.
    pub fn discriminant(&self) -> i64 {
        4 * self.n * self.m - self.r * self.r
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n > 0 && self.m > 0 && self.discriminant() > 0
    }

    /// `0 <= r <= n <= m`.
    pub fn is_reduced(&self) -> bool {
        0 <= self.r && self.r <= self.n && self.n <= self.m
    }

    /// Canonical representative of the `GL2(Z)`-class `T -> U^t T U`, or
    /// `None` outside the positive-definite cone.
    ///
    /// Even-weight level-one coefficients are invariant under the full
    /// `GL2(Z)`, so the sign of `r` can always be normalized away.
    pub fn reduce(&self) -> Option<SiegelIndex> {
        if !self.is_positive_definite() {
            return None;
        }
        let (mut n, mut r, mut m) = (self.n, self.r, self.m);
        loop {
            if n > m {
                std::mem::swap(&mut n, &mut m);
            }
            if r.abs() <= n {
                break;
            }
            // T[[1, t], [0, 1]] = (n, r + 2nt, n t^2 + r t + m)
            let two_n = 2 * n;
            let t = -(r + n).div_euclid(two_n);
            m += n * t * t + r * t;
            r += two_n * t;
        }
        Some(SiegelIndex::new(n, r.abs(), m))
    }

    /// All reduced indices with `m <= bound`, ordered by `(m, n, r)`.
    pub fn reduced_up_to(bound: u64) -> Vec<SiegelIndex> {
        let bound = bound as i64;
        let mut out = Vec::new();
        for m in 1..=bound {
            for n in 1..=m {
                for r in 0..=n {
                    let idx = SiegelIndex::new(n, r, m);
                    if idx.is_positive_definite() {
                        out.push(idx);
                    }
                }
            }
        }
        out
    }

    /// Ordering key used to pick probe coefficients: `(4nm - r^2, n, m, r)`.
    pub fn probe_key(&self) -> (i64, i64, i64, i64) {
        (self.discriminant(), self.n, self.m, self.r)
    }
}

impl fmt::Display for SiegelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.r, self.m)
    }
}
