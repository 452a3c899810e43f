use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sklift::characterize::{
    growth_check, lift_certificate, positivity_scan, read_records, write_records, EigenvalueRecord,
};
use sklift::kohnen::PlusSpaceForm;
use sklift::numeric::{format_rational, is_prime, Rational};
use sklift::pipeline::{bound_for_primes, plan_bounds, plus_form, sk_lift_from_plus, BoundPlan};
use sklift::siegel::{
    check_maass_p_space, check_maass_space, hecke_eigenvalue, MaassReport, SiegelFourierTable,
    SiegelIndex,
};

use crate::cache::{Cache, CacheKey};
use crate::report::Report;
use crate::{Exit, Failure};

/// Primes used by `lift` to cross-check its own output and by `check --all`.
pub const DEFAULT_CHECK_PRIMES: [u64; 3] = [2, 3, 5];

/// Violations listed per relation before truncating the report.
const MAX_LISTED: usize = 20;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: Exit,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            exit: Exit::Success,
        }
    }
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn index_json(i: &SiegelIndex) -> Value {
    json!([i.n, i.r, i.m])
}

pub fn plan_line(plan: &BoundPlan) -> String {
    format!(
        "plan: weight {} Siegel bound {} -> Jacobi discriminants <= {} -> plus-space truncation {} (Hecke T(m) extractable for m <= {})",
        plan.weight, plan.siegel_bound, plan.jacobi_discriminant, plan.plus_truncation, plan.max_hecke_index
    )
}

#[derive(Clone, Debug)]
pub struct LiftOptions {
    pub weight: u32,
    pub bound: u64,
    pub out: Option<PathBuf>,
    pub cache: Option<Cache>,
}

pub fn default_table_path(weight: u32, bound: u64) -> PathBuf {
    PathBuf::from(format!("sk_lift_k{weight}_b{bound}.json"))
}

/// Plus-space form at the planned truncation, from the cache when possible.
fn cached_plus_form(
    plan: &BoundPlan,
    cache: Option<&Cache>,
    log: &mut dyn Write,
) -> Result<PlusSpaceForm, Failure> {
    let key = CacheKey::new("kohnen", "plus_form", plan.weight, plan.plus_truncation);
    if let Some(cache) = cache {
        if let Some(series) = cache.load_series(&key).map_err(Failure::internal)? {
            let _ = writeln!(
                log,
                "cache: plus-space form read from {}",
                cache.dir().display()
            );
            return PlusSpaceForm::new(plan.weight, series).map_err(Failure::from);
        }
    }
    let g = plus_form(plan)?;
    if let Some(cache) = cache {
        let path = cache
            .store_series(&key, g.expansion())
            .map_err(Failure::internal)?;
        let _ = writeln!(log, "cache: stored {}", path.display());
    }
    Ok(g)
}

fn relation_json(name: &str, p: Option<u64>, r: &MaassReport) -> Value {
    json!({
        "relation": name,
        "p": p,
        "checked": r.checked,
        "skipped": r.skipped,
        "violation_count": r.violations.len(),
        "violations": r.violations.iter().take(MAX_LISTED).map(|v| json!({
            "index": index_json(&v.index),
            "lhs": q(&v.lhs),
            "rhs": q(&v.rhs),
        })).collect::<Vec<_>>(),
    })
}

fn relation_row(name: &str, p: Option<u64>, r: &MaassReport) -> Vec<String> {
    vec![
        name.to_string(),
        p.map(|p| p.to_string()).unwrap_or_default(),
        r.checked.to_string(),
        r.skipped.to_string(),
        r.violations.len().to_string(),
    ]
}

fn relation_line(name: &str, p: Option<u64>, r: &MaassReport) -> String {
    let label = match p {
        Some(p) => format!("{name} at p = {p}"),
        None => name.to_string(),
    };
    let mut s = format!(
        "{label}: {} checked, {} skipped, {} violations",
        r.checked,
        r.skipped,
        r.violations.len()
    );
    for v in r.violations.iter().take(5) {
        s.push_str(&format!(
            "\n    at {}: {} != {}",
            v.index,
            q(&v.lhs),
            q(&v.rhs)
        ));
    }
    s
}

/// Runs the divisor-sum relation (when `maass`) and the p-relation at each prime.
fn run_checks(
    table: &SiegelFourierTable,
    maass: bool,
    primes: &[u64],
) -> Result<Vec<(&'static str, Option<u64>, MaassReport)>, Failure> {
    let mut out = Vec::new();
    if maass {
        out.push(("maass", None, check_maass_space(table)));
    }
    for &p in primes {
        out.push(("maass-p", Some(p), check_maass_p_space(table, p)?));
    }
    Ok(out)
}

pub fn cmd_lift(opts: &LiftOptions, log: &mut dyn Write) -> Result<Outcome, Failure> {
    let plan = plan_bounds(opts.weight, opts.bound)?;
    let _ = writeln!(log, "{}", plan_line(&plan));
    let g = cached_plus_form(&plan, opts.cache.as_ref(), log)?;
    let lift = sk_lift_from_plus(g, opts.bound)?;
    let checks = run_checks(&lift.table, true, &DEFAULT_CHECK_PRIMES)?;
    if let Some((name, p, r)) = checks.iter().find(|(_, _, r)| !r.is_clean()) {
        return Err(Failure::new(
            Exit::Internal,
            format!(
                "lift failed its own cross-check: {}",
                relation_line(name, *p, r)
            ),
        ));
    }
    let path = opts
        .out
        .clone()
        .unwrap_or_else(|| default_table_path(opts.weight, opts.bound));
    lift.table.save(&path)?;
    let a111 = lift.table.get(SiegelIndex::new(1, 1, 1))?;
    let af2 = lift.elliptic.coeff(2).to_string();
    let json = json!({
        "weight": opts.weight,
        "bound": opts.bound,
        "plan": {
            "jacobi_discriminant": plan.jacobi_discriminant,
            "plus_truncation": plan.plus_truncation,
        },
        "elliptic_a2": af2,
        "table": path.display().to_string(),
        "nonzero_entries": lift.table.nonzero_count(),
        "a_1_1_1": q(&a111),
        "checks": checks.iter().map(|(n, p, r)| relation_json(n, *p, r)).collect::<Vec<_>>(),
    });
    let rows = vec![vec![
        opts.weight.to_string(),
        opts.bound.to_string(),
        path.display().to_string(),
        lift.table.nonzero_count().to_string(),
        q(&a111),
        af2.clone(),
    ]];
    let mut human = format!(
        "Saito-Kurokawa lift of weight {} to bound {}\n  elliptic partner in S_{}: a(2) = {af2}\n  {} nonzero reduced coefficients, A(1,1,1) = {}\n",
        opts.weight,
        opts.bound,
        2 * opts.weight - 2,
        lift.table.nonzero_count(),
        q(&a111)
    );
    for (n, p, r) in &checks {
        human.push_str(&format!("  {}\n", relation_line(n, *p, r)));
    }
    human.push_str(&format!("  written to {}", path.display()));
    Ok(Outcome::ok(Report::new(
        json,
        &[
            "weight",
            "bound",
            "table",
            "nonzero_entries",
            "a_1_1_1",
            "elliptic_a2",
        ],
        rows,
        human,
    )))
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub table: PathBuf,
    pub maass: bool,
    pub primes: Vec<u64>,
}

pub fn cmd_check(opts: &CheckOptions) -> Result<Outcome, Failure> {
    let table = SiegelFourierTable::load(&opts.table)?;
    let (maass, primes) = if !opts.maass && opts.primes.is_empty() {
        (true, DEFAULT_CHECK_PRIMES.to_vec())
    } else {
        (opts.maass, opts.primes.clone())
    };
    let checks = run_checks(&table, maass, &primes)?;
    let clean = checks.iter().all(|(_, _, r)| r.is_clean());
    let json = json!({
        "table": opts.table.display().to_string(),
        "weight": table.weight(),
        "bound": table.bound(),
        "clean": clean,
        "checks": checks.iter().map(|(n, p, r)| relation_json(n, *p, r)).collect::<Vec<_>>(),
    });
    let rows = checks
        .iter()
        .map(|(n, p, r)| relation_row(n, *p, r))
        .collect();
    let mut human = format!(
        "{} (weight {}, bound {}): {}\n",
        opts.table.display(),
        table.weight(),
        table.bound(),
        if clean { "clean" } else { "VIOLATIONS FOUND" }
    );
    for (n, p, r) in &checks {
        human.push_str(&format!("  {}\n", relation_line(n, *p, r)));
    }
    Ok(Outcome {
        report: Report::new(
            json,
            &["relation", "p", "checked", "skipped", "violations"],
            rows,
            human,
        ),
        exit: if clean {
            Exit::Success
        } else {
            Exit::CheckFailed
        },
    })
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    pub table: PathBuf,
    pub primes: Vec<u64>,
    pub out: Option<PathBuf>,
}

pub fn eigen_records(
    table: &SiegelFourierTable,
    primes: &[u64],
) -> Result<Vec<EigenvalueRecord>, Failure> {
    for &p in primes {
        if !is_prime(p) {
            return Err(Failure::usage(format!("{p} is not prime")));
        }
    }
    let need = bound_for_primes(primes);
    if table.bound() < need {
        return Err(Failure::usage(format!(
            "table bound {} is too small for mu(p^2) at the requested primes: need bound >= {need}",
            table.bound()
        )));
    }
    primes
        .iter()
        .map(|&p| {
            let mu_p = hecke_eigenvalue(table, p)?;
            let mu_p2 = hecke_eigenvalue(table, p * p)?;
            Ok(EigenvalueRecord::new(table.weight(), p, mu_p, mu_p2)?)
        })
        .collect()
}

pub fn cmd_eigen(opts: &EigenOptions) -> Result<Outcome, Failure> {
    let table = SiegelFourierTable::load(&opts.table)?;
    let records = eigen_records(&table, &opts.primes)?;
    if let Some(path) = &opts.out {
        fs::write(path, write_records(&records))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let json = json!({
        "table": opts.table.display().to_string(),
        "records": records.iter().map(EigenvalueRecord::to_json).collect::<Vec<_>>(),
    });
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.weight.to_string(),
                r.p.to_string(),
                q(&r.mu_p),
                q(&r.mu_p2),
            ]
        })
        .collect();
    let mut human = String::new();
    for r in &records {
        human.push_str(&format!(
            "mu({}) = {}, mu({}) = {}\n",
            r.p,
            q(&r.mu_p),
            r.p * r.p,
            q(&r.mu_p2)
        ));
    }
    if let Some(path) = &opts.out {
        human.push_str(&format!("records written to {}", path.display()));
    }
    Ok(Outcome::ok(Report::new(
        json,
        &["weight", "p", "mu_p", "mu_p2"],
        rows,
        human,
    )))
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// JSON-lines record file; `-` reads standard input.
    pub records: PathBuf,
    pub scan: usize,
}

fn load_records(path: &Path) -> Result<Vec<EigenvalueRecord>, Failure> {
    if path == Path::new("-") {
        return Ok(read_records(std::io::stdin().lock())?);
    }
    let file =
        fs::File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(read_records(BufReader::new(file))?)
}

pub fn classify_records(records: &[EigenvalueRecord], scan: usize) -> Outcome {
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut human = String::new();
    let mut any_inconsistent = false;
    for rec in records {
        let cert = lift_certificate(rec);
        let growth = growth_check(rec, scan);
        let signs = positivity_scan(rec, scan);
        any_inconsistent |= cert.inconsistent;
        let fired: Vec<&str> = cert.conditions_fired.iter().map(|c| c.label()).collect();
        results.push(json!({
            "record": rec.to_json(),
            "certificate": cert.to_json(),
            "growth": growth.to_json(),
            "positivity": signs.to_json(),
        }));
        let opt = |r: Option<usize>| r.map(|r| r.to_string()).unwrap_or_default();
        rows.push(vec![
            rec.weight.to_string(),
            rec.p.to_string(),
            q(&rec.mu_p),
            q(&rec.mu_p2),
            cert.verdict.to_string(),
            fired.join(";"),
            cert.satake.class.to_string(),
            cert.inconsistent.to_string(),
            opt(growth.sharp_first_failure),
            opt(growth.weak_first_failure),
            signs.all_positive().to_string(),
            signs.sign_changes.len().to_string(),
        ]);
        let growth_text = match (growth.sharp_first_failure, growth.weak_first_failure) {
            (None, None) => format!("both growth bounds hold for r <= {scan}"),
            (s, w) => format!(
                "growth bounds first fail at r = {} (sharp) and r = {} (weak)",
                s.map_or("-".to_string(), |r| r.to_string()),
                w.map_or("-".to_string(), |r| r.to_string())
            ),
        };
        human.push_str(&format!(
            "k = {}, p = {}, mu(p) = {}, mu(p^2) = {}\n  verdict {}{}; conditions fired: [{}]; Satake type {}\n  {growth_text}\n  signs for r <= {scan}: {}\n",
            rec.weight,
            rec.p,
            q(&rec.mu_p),
            q(&rec.mu_p2),
            cert.verdict,
            if cert.inconsistent { " (INCONSISTENT with eigenform data)" } else { "" },
            fired.join(", "),
            cert.satake.class,
            if signs.all_positive() {
                "all positive".to_string()
            } else {
                format!("{} sign changes", signs.sign_changes.len())
            }
        ));
    }
    Outcome {
        report: Report::new(
            json!({ "scan": scan, "results": results }),
            &[
                "weight",
                "p",
                "mu_p",
                "mu_p2",
                "verdict",
                "conditions_fired",
                "satake_class",
                "inconsistent",
                "sharp_bound_first_failure",
                "weak_bound_first_failure",
                "all_positive",
                "sign_changes",
            ],
            rows,
            human,
        ),
        exit: if any_inconsistent {
            Exit::CheckFailed
        } else {
            Exit::Success
        },
    }
}

pub fn cmd_classify(opts: &ClassifyOptions) -> Result<Outcome, Failure> {
    let records = load_records(&opts.records)?;
    Ok(classify_records(&records, opts.scan))
}
