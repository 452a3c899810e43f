//! Eigenvalue-level characterization of Saito-Kurokawa lifts at one prime:
//! Satake parameters, the single-prime criteria, the spin generating
//! function for `mu(p^r)`, growth bounds and sign patterns.

mod certificate;
mod satake;
mod spin;

pub use certificate::{lift_certificate, Certificate, Condition, Verdict};
pub use satake::{
    eigenvalues_from_roots, real_roots_ordered, solve_satake, SatakeClass, SatakeParams,
    SatakeRoots,
};
pub use spin::{
    growth_check, mu_sequence, positivity_scan, GrowthReport, PositivityReport, SpinEulerData,
};

use std::io::BufRead;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::arith::rational_pow;
use crate::numeric::{format_rational, is_prime, parse_rational, rat, Rational};

/// Hecke eigenvalues `mu_F(p)` and `mu_F(p^2)` of a weight-`k` form.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueRecord {
    pub weight: u32,
    pub p: u64,
    pub mu_p: Rational,
    pub mu_p2: Rational,
}

impl EigenvalueRecord {
    pub fn new(weight: u32, p: u64, mu_p: Rational, mu_p2: Rational) -> Result<Self> {
        if weight % 2 == 1 || weight < 10 {
            return Err(Error::invalid(format!(
                "weight {weight}: records need an even weight >= 10"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(EigenvalueRecord {
            weight,
            p,
            mu_p,
            mu_p2,
        })
    }

    /// The record whose Satake data satisfy `x + y = s sqrt(p)` and `xy = prod`.
    pub fn from_satake_data(weight: u32, p: u64, s: &Rational, prod: &Rational) -> Result<Self> {
        let k = weight as i64;
        let pr = rat(p as i64);
        let mu_p = s * rational_pow(p, k - 1);
        let v = s * s * &pr - prod - rat(2) - pr.recip();
        let mu_p2 = v * rational_pow(p, 2 * k - 3);
        Self::new(weight, p, mu_p, mu_p2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.weight,
            "p": self.p,
            "mu_p": format_rational(&self.mu_p),
            "mu_p2": format_rational(&self.mu_p2),
        })
    }

    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        let obj = v.as_object().ok_or("expected a JSON object")?;
        let field = |name: &str| obj.get(name).ok_or(format!("missing field {name:?}"));
        let int = |name: &str| -> std::result::Result<u64, String> {
            match field(name)? {
                Value::Number(n) => n
                    .as_u64()
                    .ok_or(format!("{name} must be a nonnegative integer")),
                Value::String(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| format!("{name} must be a nonnegative integer")),
                _ => Err(format!("{name} must be an integer")),
            }
        };
        let exact = |name: &str| -> std::result::Result<Rational, String> {
            let text = match field(name)? {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => {
                    return Err(format!(
                        "{name} must be an exact integer or rational string"
                    ))
                }
            };
            parse_rational(&text).ok_or(format!("{name}: cannot parse {text:?} as a rational"))
        };
        let weight = u32::try_from(int("weight")?).map_err(|_| "weight too large".to_string())?;
        Self::new(weight, int("p")?, exact("mu_p")?, exact("mu_p2")?).map_err(|e| e.to_string())
    }
}

/// Reads JSON-lines records, skipping blank lines; errors carry the 1-based line number.
pub fn read_records(reader: impl BufRead) -> Result<Vec<EigenvalueRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let rec = EigenvalueRecord::from_json(&value).map_err(|message| Error::Parse {
            line: line_no,
            message,
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_records(records: &[EigenvalueRecord]) -> String {
    records
        .iter()
        .map(|r| format!("{}\n", r.to_json()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat_frac;

    #[test]
    fn validation() {
        assert!(EigenvalueRecord::new(10, 2, rat(240), rat(135424)).is_ok());
        assert!(EigenvalueRecord::new(11, 2, rat(0), rat(0)).is_err());
        assert!(EigenvalueRecord::new(8, 2, rat(0), rat(0)).is_err());
        assert!(EigenvalueRecord::new(10, 9, rat(0), rat(0)).is_err());
    }

    #[test]
    fn json_lines_round_trip() {
        let recs = vec![
            EigenvalueRecord::new(10, 2, rat(240), rat(135424)).unwrap(),
            EigenvalueRecord::new(12, 3, rat_frac(-7, 3), rat(0)).unwrap(),
        ];
        let text = write_records(&recs);
        assert_eq!(read_records(text.as_bytes()).unwrap(), recs);
    }

    #[test]
    fn lenient_numbers_and_line_numbers() {
        let text = "{\"weight\": \"10\", \"p\": 2, \"mu_p\": 240, \"mu_p2\": \"135424\"}\n\n{\"weight\": 10, \"p\": 2, \"mu_p\": \"x\"}\n";
        match read_records(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "{\"weight\": 10, \"p\": 2, \"mu_p\": 240, \"mu_p2\": \"135424\"}\nnot json\n";
        assert!(matches!(
            read_records(text.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        let text = "{\"weight\": 10, \"p\": 2, \"mu_p\": 1.5, \"mu_p2\": \"1\"}\n";
        assert!(read_records(text.as_bytes()).is_err());
    }

    #[test]
    fn satake_data_constructor_matches_the_lift_record() {
        // x = 3/sqrt(2), y = -33/(16 sqrt(2)): s = 15/32, xy = -99/32
        let rec = EigenvalueRecord::from_satake_data(10, 2, &rat_frac(15, 32), &rat_frac(-99, 32))
            .unwrap();
        assert_eq!((rec.mu_p, rec.mu_p2), (rat(240), rat(135424)));
    }
}
