//! The full chain `f -> g -> phi -> F` with its truncation bookkeeping.

use crate::elliptic::{dim_cusp, EllipticEigenform};
use crate::error::{Error, Result};
use crate::jacobi::{ez_lift, JacobiForm};
use crate::kohnen::{
    default_constraint_bound, plus_eigenvalue, plus_space_basis, shimura_match, PlusSpaceForm,
};
use crate::siegel::{maass_lift, required_discriminant, SiegelFourierTable};

/// Truncations needed at each stage to fill a Siegel table up to `bound`,
/// obtained by walking the chain backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundPlan {
    pub weight: u32,
    pub siegel_bound: u64,
    /// Largest `4nm - r^2` over reduced indices within the bound.
    pub jacobi_discriminant: u64,
    /// Plus-space truncation: the discriminant, but never below the
    /// constraint bound used to cut out the plus space.
    pub plus_truncation: usize,
    /// Largest Hecke similitude `m` whose output still reaches `(1, 1, 1)`.
    pub max_hecke_index: u64,
}

pub fn plan_bounds(weight: u32, siegel_bound: u64) -> Result<BoundPlan> {
    check_lift_weight(weight)?;
    if siegel_bound == 0 {
        return Err(Error::invalid("Siegel bound must be at least 1"));
    }
    let jacobi_discriminant = required_discriminant(siegel_bound);
    let plus_truncation = (jacobi_discriminant as usize).max(default_constraint_bound(weight));
    Ok(BoundPlan {
        weight,
        siegel_bound,
        jacobi_discriminant,
        plus_truncation,
        max_hecke_index: siegel_bound,
    })
}

/// Smallest Siegel bound at which `mu(p)` and `mu(p^2)` are extractable for
/// every listed prime.
pub fn bound_for_primes(primes: &[u64]) -> u64 {
    primes.iter().map(|p| p * p).max().unwrap_or(1)
}

/// Even `k` with `S_{2k-2}` one-dimensional, so the eigenform is rational.
pub fn check_lift_weight(k: u32) -> Result<()> {
    if k % 2 == 1 {
        return Err(Error::invalid(format!(
            "weight {k} is odd; lifts exist only in even weight"
        )));
    }
    let w = 2 * k.max(2) - 2;
    match dim_cusp(w) {
        0 => Err(Error::invalid(format!("dim S_{w} = 0, no lift exists"))),
        1 => Ok(()),
        d => Err(Error::invalid(format!(
            "dim S_{w} = {d}: only one-dimensional S_{w} gives a rational lift"
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct SkLift {
    pub elliptic: EllipticEigenform,
    pub plus: PlusSpaceForm,
    pub jacobi: JacobiForm,
    pub table: SiegelFourierTable,
}

/// The plus-space generator for a lift weight, at the planned truncation.
pub fn plus_form(plan: &BoundPlan) -> Result<PlusSpaceForm> {
    let mut basis = plus_space_basis(plan.weight, plan.plus_truncation)?;
    Ok(basis.remove(0))
}

/// Runs the chain from a given plus-space form, cross-checking the
/// Shimura correspondence along the way.
pub fn sk_lift_from_plus(g: PlusSpaceForm, siegel_bound: u64) -> Result<SkLift> {
    let plan = plan_bounds(g.k(), siegel_bound)?;
    if g.truncation() < plan.plus_truncation {
        return Err(Error::truncation(
            "plus-space form for the lift",
            g.truncation() as u64,
            plan.plus_truncation as u64,
        ));
    }
    let f = shimura_match(&g.to_quad())?;
    let lambda = plus_eigenvalue(&g, 2)?;
    if f.rational_eigenvalue(2)? != lambda {
        return Err(Error::Inconsistent(format!(
            "T+(4) eigenvalue {lambda} differs from a_f(2) = {}",
            f.coeff(2)
        )));
    }
    let jacobi = ez_lift(&g);
    let table = maass_lift(&jacobi, siegel_bound)?;
    if table.is_zero() {
        return Err(Error::Inconsistent("lift produced the zero table".into()));
    }
    Ok(SkLift {
        elliptic: f,
        plus: g,
        jacobi,
        table,
    })
}

pub fn sk_lift(weight: u32, siegel_bound: u64) -> Result<SkLift> {
    let plan = plan_bounds(weight, siegel_bound)?;
    sk_lift_from_plus(plus_form(&plan)?, siegel_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, QuadExt};
    use crate::siegel::{hecke_eigenvalue, SiegelIndex};

    #[test]
    fn planner_walks_backwards() {
        let plan = plan_bounds(10, 6).unwrap();
        assert_eq!(plan.jacobi_discriminant, 144);
        assert_eq!(plan.plus_truncation, 144);
        assert_eq!(plan_bounds(12, 2).unwrap().plus_truncation, 48);
        assert_eq!(bound_for_primes(&[2, 3]), 9);
        assert_eq!(bound_for_primes(&[]), 1);
    }

    #[test]
    fn weight_gate() {
        let msg = check_lift_weight(8).unwrap_err().to_string();
        assert!(msg.contains("dim S_14 = 0, no lift exists"), "{msg}");
        assert!(check_lift_weight(11)
            .unwrap_err()
            .to_string()
            .contains("odd"));
        assert!(check_lift_weight(16)
            .unwrap_err()
            .to_string()
            .contains("dim S_30 = 2"));
        for k in [10, 12, 14] {
            check_lift_weight(k).unwrap();
        }
    }

    #[test]
    fn weight_10_end_to_end() {
        let lift = sk_lift(10, 4).unwrap();
        assert_eq!(lift.elliptic.coeff(2), &QuadExt::rational(rat(-528)));
        assert_ne!(lift.table.get(SiegelIndex::new(1, 1, 1)).unwrap(), rat(0));
        assert_eq!(hecke_eigenvalue(&lift.table, 2).unwrap(), rat(240));
    }

    #[test]
    fn short_plus_form_is_refused() {
        let g = plus_space_basis(10, 60).unwrap().remove(0);
        assert!(matches!(
            sk_lift_from_plus(g, 6),
            Err(Error::InsufficientTruncation { need: 144, .. })
        ));
    }
}
