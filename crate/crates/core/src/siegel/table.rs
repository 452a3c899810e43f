use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SiegelIndex;
use crate::error::{Error, Result};
use crate::numeric::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// Fourier coefficients `A(n, r, m)` of a degree-2 form of weight `k`,
/// stored sparsely on reduced indices with `m <= bound`.
///
/// Any index whose reduced representative has `m <= bound` can be read;
/// indices outside the positive-definite cone read as 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelFourierTable {
    weight: u32,
    bound: u64,
    entries: BTreeMap<SiegelIndex, Rational>,
}

impl SiegelFourierTable {
    pub fn new(weight: u32, bound: u64) -> Self {
        SiegelFourierTable {
            weight,
            bound,
            entries: BTreeMap::new(),
        }
    }

    /// Evaluates `f` on every reduced index within `bound`, in parallel.
    pub fn try_from_fn<F>(weight: u32, bound: u64, f: F) -> Result<Self>
    where
        F: Fn(SiegelIndex) -> Result<Rational> + Sync,
    {
        let values: Vec<(SiegelIndex, Rational)> = SiegelIndex::reduced_up_to(bound)
            .into_par_iter()
            .map(|idx| f(idx).map(|v| (idx, v)))
            .collect::<Result<_>>()?;
        let entries = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(SiegelFourierTable {
            weight,
            bound,
            entries,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Nonzero entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = (&SiegelIndex, &Rational)> {
        self.entries.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `A(idx)`, or `None` when its reduced representative lies beyond the bound.
    pub fn try_get(&self, idx: SiegelIndex) -> Option<Rational> {
        let Some(red) = idx.reduce() else {
            return Some(Rational::zero());
        };
        if red.m as u64 > self.bound {
            return None;
        }
        Some(
            self.entries
                .get(&red)
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    pub fn get(&self, idx: SiegelIndex) -> Result<Rational> {
        self.try_get(idx).ok_or(Error::OutOfRange {
            index: idx,
            bound: self.bound,
        })
    }

    /// Sets the coefficient of the whole unimodular class of `idx`.
    pub fn set(&mut self, idx: SiegelIndex, value: Rational) -> Result<()> {
        let red = idx
            .reduce()
            .ok_or_else(|| Error::invalid(format!("{idx} is not positive definite")))?;
        if red.m as u64 > self.bound {
            return Err(Error::OutOfRange {
                index: idx,
                bound: self.bound,
            });
        }
        if value.is_zero() {
            self.entries.remove(&red);
        } else {
            self.entries.insert(red, value);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let entries = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.entries.iter().map(|(i, v)| (*i, v * c)).collect()
        };
        SiegelFourierTable {
            weight: self.weight,
            bound: self.bound,
            entries,
        }
    }

    /// The same coefficients with a smaller bound.
    pub fn restrict(&self, bound: u64) -> Self {
        let bound = bound.min(self.bound);
        SiegelFourierTable {
            weight: self.weight,
            bound,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| i.m as u64 <= bound)
                .map(|(i, v)| (*i, v.clone()))
                .collect(),
        }
    }

    /// Nonzero index minimizing `(4nm - r^2, n, m, r)`, searched up to `bound`.
    pub fn probe(&self, bound: u64) -> Option<SiegelIndex> {
        self.entries
            .keys()
            .filter(|i| i.m as u64 <= bound)
            .min_by_key(|i| i.probe_key())
            .copied()
    }

    pub fn to_json(&self) -> String {
        let raw = RawTable {
            schema_version: SCHEMA_VERSION,
            weight: self.weight,
            bound: self.bound,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (i.n, i.r, i.m, v.numer().to_string(), v.denom().to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawTable = serde_json::from_str(s)?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema {
                found: raw.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let mut table = SiegelFourierTable::new(raw.weight, raw.bound);
        for (n, r, m, num, den) in raw.entries {
            let idx = SiegelIndex::new(n, r, m);
            if !idx.is_reduced() || !idx.is_positive_definite() {
                return Err(Error::invalid(format!(
                    "table entry {idx} is not a reduced index"
                )));
            }
            let num: BigInt = num
                .parse()
                .map_err(|_| Error::invalid(format!("bad numerator {num:?} at {idx}")))?;
            let den: BigInt = den
                .parse()
                .map_err(|_| Error::invalid(format!("bad denominator {den:?} at {idx}")))?;
            if den.is_zero() {
                return Err(Error::invalid(format!("zero denominator at {idx}")));
            }
            table.set(idx, Rational::new(num, den))?;
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    schema_version: u32,
    weight: u32,
    bound: u64,
    entries: Vec<(i64, i64, i64, String, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_frac};

    fn sample() -> SiegelFourierTable {
        SiegelFourierTable::try_from_fn(10, 5, |i| Ok(rat_frac(i.discriminant() - 2 * i.r, 3)))
            .unwrap()
    }

    #[test]
    fn lookups_route_through_reduction() {
        let t = sample();
        assert_eq!(
            t.get(SiegelIndex::new(4, 2, 1)).unwrap(),
            t.get(SiegelIndex::new(1, 0, 3)).unwrap()
        );
        assert_eq!(
            t.get(SiegelIndex::new(1, -1, 1)).unwrap(),
            t.get(SiegelIndex::new(1, 1, 1)).unwrap()
        );
        assert_eq!(t.get(SiegelIndex::new(1, 2, 1)).unwrap(), rat(0));
        assert_eq!(t.get(SiegelIndex::new(-1, 0, 3)).unwrap(), rat(0));
        assert!(matches!(
            t.get(SiegelIndex::new(6, 0, 6)),
            Err(Error::OutOfRange { .. })
        ));
        // n = 7 exceeds the bound but the class is that of (1, 1, 1)
        assert_eq!(
            t.get(SiegelIndex::new(7, 5, 1)).unwrap(),
            t.get(SiegelIndex::new(1, 1, 1)).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let back = SiegelFourierTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_other_schema_and_bad_entries() {
        let s = sample()
            .to_json()
            .replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(
            SiegelFourierTable::from_json(&s),
            Err(Error::Schema { found: 7, .. })
        ));
        let bad = r#"{"schema_version":1,"weight":10,"bound":3,"entries":[[2,1,1,"1","1"]]}"#;
        assert!(SiegelFourierTable::from_json(bad).is_err());
        let bad = r#"{"schema_version":1,"weight":10,"bound":3,"entries":[[1,1,1,"x","1"]]}"#;
        assert!(SiegelFourierTable::from_json(bad).is_err());
    }

    #[test]
    fn probe_is_minimal_discriminant() {
        let mut t = SiegelFourierTable::new(10, 4);
        t.set(SiegelIndex::new(2, 0, 2), rat(5)).unwrap();
        t.set(SiegelIndex::new(1, 1, 3), rat(1)).unwrap();
        assert_eq!(t.probe(4), Some(SiegelIndex::new(1, 1, 3)));
        assert_eq!(t.probe(2), Some(SiegelIndex::new(2, 0, 2)));
        assert_eq!(t.probe(1), None);
        t.set(SiegelIndex::new(3, 0, 3), rat(0)).unwrap();
        assert_eq!(t.nonzero_count(), 2);
    }
}
