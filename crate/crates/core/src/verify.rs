//! Exhaustive checks over small `(n, k)` cells, each producing a [`Certificate`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{binomial_u64, gcd, is_prime};
use crate::bijection::{
    certify_table, prime_bijection_with, riwi_coprime, riwi_slime, verify_riwi, Chooser, RiwiReport,
    MAX_COUNTEREXAMPLES,
};
use crate::code::{enumerate_codes, Code};
use crate::error::{Error, Result};
use crate::necklace::{count_necklaces, enumerate_necklaces};
use crate::slime::{self, decompose, SlimeDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub wall_time_ms: f64,
}

/// Outcome of one check on one `(n, k)` cell. A failing certificate always
/// carries at least one counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub check: String,
    pub n: usize,
    pub k: u64,
    pub verdict: Verdict,
    pub counterexamples: Vec<Value>,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, Value>,
    pub metadata: Metadata,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The certificate with its timing zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Certificate {
        Certificate { metadata: Metadata { wall_time_ms: 0.0 }, ..self.clone() }
    }
}

/// Accumulates counterexamples and counters while a check runs.
struct Recorder {
    check: Check,
    n: usize,
    k: u64,
    started: Instant,
    counterexamples: Vec<Value>,
    violations: u64,
    counts: BTreeMap<String, u64>,
    observations: BTreeMap<String, Value>,
}

impl Recorder {
    fn new(check: Check, n: usize, k: u64) -> Self {
        Recorder {
            check,
            n,
            k,
            started: Instant::now(),
            counterexamples: Vec::new(),
            violations: 0,
            counts: BTreeMap::new(),
            observations: BTreeMap::new(),
        }
    }

    fn fail(&mut self, counterexample: Value) {
        self.violations += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(counterexample);
        }
    }

    fn count(&mut self, key: &str, by: u64) {
        *self.counts.entry(key.to_string()).or_default() += by;
    }

    fn observe(&mut self, key: &str, value: Value) {
        self.observations.insert(key.to_string(), value);
    }

    fn finish(mut self) -> Certificate {
        self.counts.insert("violations".into(), self.violations);
        let verdict = if self.violations == 0 { Verdict::Pass } else { Verdict::Fail };
        Certificate {
            check: self.check.name().to_string(),
            n: self.n,
            k: self.k,
            verdict,
            counterexamples: self.counterexamples,
            counts: self.counts,
            observations: self.observations,
            metadata: Metadata { wall_time_ms: self.started.elapsed().as_secs_f64() * 1e3 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    LemmaOddInv,
    MigrationLaws,
    WeightBounds,
    RiwiSlime,
    RiwiRotation,
    PrimeBijection,
    CountIdentity,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::LemmaOddInv,
        Check::MigrationLaws,
        Check::WeightBounds,
        Check::RiwiSlime,
        Check::RiwiRotation,
        Check::PrimeBijection,
        Check::CountIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::LemmaOddInv => "lemma_oddinv",
            Check::MigrationLaws => "migration_laws",
            Check::WeightBounds => "weight_bounds",
            Check::RiwiSlime => "riwi_slime",
            Check::RiwiRotation => "riwi_rotation",
            Check::PrimeBijection => "prime_bijection",
            Check::CountIdentity => "count_identity",
        }
    }

    /// Whether the check's precondition holds on the cell.
    pub fn applies(self, n: usize, k: u64) -> bool {
        match self {
            Check::LemmaOddInv => n % 2 == 1,
            Check::RiwiSlime => n % 2 == 1 && is_prime(n as u64),
            Check::RiwiRotation => gcd(n as u64, k) == 1,
            Check::PrimeBijection => is_prime(n as u64),
            Check::MigrationLaws | Check::WeightBounds | Check::CountIdentity => true,
        }
    }

    pub fn run(self, n: usize, k: u64) -> Result<Certificate> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        match self {
            Check::LemmaOddInv => check_lemma_oddinv(n, k),
            Check::MigrationLaws => Ok(check_migration_laws(n, k)),
            Check::WeightBounds => Ok(check_weight_bounds(n, k)),
            Check::RiwiSlime => Ok(riwi_certificate(self, n, k, &verify_riwi(&riwi_slime(n, k)?, n, k))),
            Check::RiwiRotation => {
                Ok(riwi_certificate(self, n, k, &verify_riwi(&riwi_coprime(n, k)?, n, k)))
            }
            Check::PrimeBijection => check_prime_bijection(n, k),
            Check::CountIdentity => check_count_identity(n, k),
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check {s:?}")))
    }
}

fn entries(f: &Code) -> Vec<u32> {
    f.entries().to_vec()
}

/// Invalid exactly when constant, for odd `n`.
pub fn check_lemma_oddinv(n: usize, k: u64) -> Result<Certificate> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenLength(n));
    }
    let mut rec = Recorder::new(Check::LemmaOddInv, n, k);
    for f in enumerate_codes(n, k, None, false) {
        rec.count("examined", 1);
        let valid = slime::is_valid(&f);
        if !valid {
            rec.count("invalid", 1);
        }
        if valid == f.is_constant() {
            rec.fail(json!({"code": entries(&f), "valid": valid, "constant": f.is_constant()}));
        }
    }
    Ok(rec.finish())
}

fn decomposition_is_well_formed(f: &Code, d: &SlimeDecomposition) -> bool {
    let n = f.n();
    let mut covered = vec![false; n];
    for slime in &d.slimes {
        if slime.len < 2 || slime.len > n {
            return false;
        }
        for (offset, pos) in slime.positions(n).enumerate() {
            if std::mem::replace(&mut covered[pos], true) {
                return false;
            }
            if offset + 1 < slime.len && u64::from(f.at(pos)) + u64::from(f.at(pos + 1)) != d.m {
                return false;
            }
        }
        // strict drop on both sides of the slime
        let before = (slime.start + n - 1) % n;
        let last = (slime.start + slime.len - 1) % n;
        if u64::from(f.at(before)) + u64::from(f.at(slime.start)) >= d.m
            || u64::from(f.at(last)) + u64::from(f.at(last + 1)) >= d.m
        {
            return false;
        }
    }
    !d.slimes.is_empty() && d.slimes.windows(2).all(|w| w[0].start < w[1].start)
}

/// Laws of forward/backward migration and of φ on every valid code of the given stream.
pub fn migration_laws_on(n: usize, k: u64, codes: impl IntoIterator<Item = Code>) -> Certificate {
    let mut rec = Recorder::new(Check::MigrationLaws, n, k);
    let mut chain = Vec::new();
    for f in codes {
        let d = decompose(&f);
        if !d.valid {
            rec.count("invalid_skipped", 1);
            continue;
        }
        rec.count("examined", 1);
        let w = d.weight.expect("valid decompositions carry a weight");
        chain.push(f.weighted_sum());
        let mut law = |name: &str, holds: bool| {
            if !holds {
                rec.fail(json!({"code": entries(&f), "law": name}));
            }
        };
        law("well_formed_decomposition", decomposition_is_well_formed(&f, &d));
        let (fwd, bwd) = match (slime::migrate_forward(&f), slime::migrate_backward(&f)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                law("migration_defined", false);
                continue;
            }
        };
        law("sum_preserved", fwd.k() == f.k() && bwd.k() == f.k());
        law("round_trip", slime::migrate_backward(&fwd).as_ref() == Ok(&f));
        law("round_trip_reverse", slime::migrate_forward(&bwd).as_ref() == Ok(&f));
        for (label, g) in [("forward", &fwd), ("backward", &bwd)] {
            let dg = decompose(g);
            law(&format!("{label}_validity"), dg.valid);
            law(&format!("{label}_weight"), dg.weight == Some(w));
            law(&format!("{label}_m"), dg.m == d.m);
            law(&format!("{label}_slime_count"), dg.slimes.len() == d.slimes.len());
        }
        let w_mod = w as usize % n;
        law("ws_shift_forward", fwd.weighted_sum() == (f.weighted_sum() + w_mod) % n);
        law("ws_shift_backward", (bwd.weighted_sum() + w_mod) % n == f.weighted_sum());
        law("rotation_equivariance", slime::migrate_forward(&f.rotate(1)).ok() == Some(fwd.rotate(1)));
        if gcd(u64::from(w), n as u64) == 1 {
            rec.count("phi_examined", 1);
            let phi = slime::phi(&f);
            let mut law = |name: &str, holds: bool| {
                if !holds {
                    rec.fail(json!({"code": entries(&f), "law": name}));
                }
            };
            match phi {
                Ok(g) => {
                    law("phi_ws_shift", g.weighted_sum() == (f.weighted_sum() + 1) % n);
                    law("phi_round_trip", slime::phi_inverse(&g).as_ref() == Ok(&f));
                    law("phi_weight", slime::weight(&g) == Ok(w));
                }
                Err(_) => law("phi_defined", false),
            }
        }
    }
    if chain.len() <= 8 {
        rec.observe("weighted_sums", json!(chain));
    }
    rec.finish()
}

pub fn check_migration_laws(n: usize, k: u64) -> Certificate {
    migration_laws_on(n, k, enumerate_codes(n, k, None, false))
}

/// `1 <= w(f) <= floor(n/2)` for every valid code.
pub fn check_weight_bounds(n: usize, k: u64) -> Certificate {
    let mut rec = Recorder::new(Check::WeightBounds, n, k);
    let mut max_seen = 0;
    for f in enumerate_codes(n, k, None, false) {
        let Some(w) = decompose(&f).weight else { continue };
        rec.count("examined", 1);
        max_seen = max_seen.max(w);
        if w < 1 || w as usize > n / 2 {
            rec.fail(json!({"code": entries(&f), "weight": w}));
        }
    }
    rec.count("max_weight", u64::from(max_seen));
    rec.finish()
}

fn riwi_certificate(check: Check, n: usize, k: u64, report: &RiwiReport) -> Certificate {
    let mut rec = Recorder::new(check, n, k);
    rec.count("examined", report.examined as u64);
    for v in &report.counterexamples {
        rec.fail(serde_json::to_value(v).expect("violations serialize"));
    }
    // the report truncates; keep the true total
    rec.violations = report.violations as u64;
    rec.observe("map", json!(report.map));
    rec.finish()
}

/// The prime-n table is a bijection `F_{n,k,0} → N_{n,k}` of the expected size,
/// for both representative choosers.
pub fn check_prime_bijection(n: usize, k: u64) -> Result<Certificate> {
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n));
    }
    let mut rec = Recorder::new(Check::PrimeBijection, n, k);
    let domain: Vec<Code> = enumerate_codes(n, k, Some(0), false).collect();
    let codomain: Vec<_> = enumerate_necklaces(n, k, false).collect();
    let expected = count_necklaces(n, k)?;
    rec.count("codes", domain.len() as u64);
    rec.count("necklaces", codomain.len() as u64);
    for chooser in [Chooser::LexMin, Chooser::LexMax] {
        let table = prime_bijection_with(n, k, chooser)?;
        let report = certify_table(&table, &domain, &codomain);
        if chooser == Chooser::LexMin {
            rec.count("pairs", report.pairs as u64);
            rec.observe("riwi", json!(table.riwi));
        }
        for v in &report.counterexamples {
            let mut value = serde_json::to_value(v).expect("violations serialize");
            value["chooser"] = json!(chooser.name());
            rec.fail(value);
        }
        if num_bigint::BigUint::from(report.pairs) != expected {
            rec.fail(json!({"kind": "size", "chooser": chooser.name(), "pairs": report.pairs, "formula": expected.to_string()}));
        }
    }
    Ok(rec.finish())
}

/// Closed form vs enumeration, and `|F_{n,k,0}|` against both. The latter is
/// asserted for odd `n` only and recorded as an observation otherwise.
pub fn check_count_identity(n: usize, k: u64) -> Result<Certificate> {
    let mut rec = Recorder::new(Check::CountIdentity, n, k);
    let formula = count_necklaces(n, k)?;
    let necklaces = enumerate_necklaces(n, k, false).count() as u64;
    let residue_zero = enumerate_codes(n, k, Some(0), false).count() as u64;
    rec.count("necklaces", necklaces);
    rec.count("codes_t0", residue_zero);
    match u64::try_from(formula.clone()) {
        Ok(v) => rec.count("formula", v),
        Err(_) => rec.observe("formula", json!(formula.to_string())),
    }
    let formula_ok = formula == necklaces.into();
    if !formula_ok {
        rec.fail(json!({"kind": "formula_vs_enumeration", "formula": formula.to_string(), "enumerated": necklaces}));
    }
    let codes_match = residue_zero == necklaces;
    if n % 2 == 1 {
        if !codes_match {
            rec.fail(json!({"kind": "codes_vs_necklaces", "codes_t0": residue_zero, "necklaces": necklaces}));
        }
    } else {
        rec.observe("codes_t0_equals_necklaces", json!(codes_match));
    }
    Ok(rec.finish())
}

/// Parameter envelope for a full sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Envelope {
    /// Every `1 <= n <= max_n`, `0 <= k <= max_k` is a cell.
    pub max_n: usize,
    pub max_k: u64,
    /// Prime lengths swept further, while `C(n+k-1, n-1) <= max_codes` and `k <= prime_k_cap`.
    pub primes: Vec<usize>,
    pub max_codes: u64,
    pub prime_k_cap: u64,
}

impl Default for Envelope {
    fn default() -> Self {
        Envelope { max_n: 8, max_k: 8, primes: vec![2, 3, 5, 7, 11], max_codes: 500_000, prime_k_cap: 60 }
    }
}

impl Envelope {
    pub fn code_count(n: usize, k: u64) -> Option<u64> {
        binomial_u64(n as u64 + k - 1, n as u64 - 1)
    }

    /// Values of `k` swept for a prime length `n`.
    pub fn prime_ks(&self, n: usize) -> Vec<u64> {
        (0..=self.prime_k_cap)
            .take_while(|&k| Envelope::code_count(n, k).is_some_and(|c| c <= self.max_codes))
            .collect()
    }

    /// All cells, sorted and without duplicates.
    pub fn cells(&self) -> Vec<(usize, u64)> {
        let mut cells: Vec<(usize, u64)> =
            (1..=self.max_n).flat_map(|n| (0..=self.max_k).map(move |k| (n, k))).collect();
        for &p in &self.primes {
            cells.extend(self.prime_ks(p).into_iter().map(|k| (p, k)));
        }
        cells.sort();
        cells.dedup();
        cells
    }
}

/// Runs every applicable check in `checks` on every cell of the envelope.
/// Output order is cell order, then check order, independent of scheduling.
pub fn sweep(envelope: &Envelope, checks: &[Check]) -> Result<Vec<Certificate>> {
    let jobs: Vec<(usize, u64, Check)> = envelope
        .cells()
        .into_iter()
        .flat_map(|(n, k)| checks.iter().filter(move |c| c.applies(n, k)).map(move |&c| (n, k, c)))
        .collect();
    jobs.par_iter().map(|&(n, k, c)| c.run(n, k)).collect()
}

/// Runs the applicable checks on a single cell.
pub fn run_cell(n: usize, k: u64, checks: &[Check]) -> Result<Vec<Certificate>> {
    checks.iter().filter(|c| c.applies(n, k)).map(|c| c.run(n, k)).collect()
}

/// Plain-text table: one line per certificate plus a totals line.
pub fn summary_table(certificates: &[Certificate]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<16} {:>3} {:>3}  {:<7} {:>10} {:>10}", "check", "n", "k", "verdict", "examined", "violations");
    for c in certificates {
        let examined = c
            .counts
            .get("examined")
            .or_else(|| c.counts.get("codes"))
            .or_else(|| c.counts.get("necklaces"))
            .copied()
            .unwrap_or(0);
        let _ = writeln!(
            out,
            "{:<16} {:>3} {:>3}  {:<7} {:>10} {:>10}",
            c.check,
            c.n,
            c.k,
            if c.passed() { "pass" } else { "FAIL" },
            examined,
            c.counts.get("violations").copied().unwrap_or(0)
        );
    }
    let failed = certificates.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(out, "{} certificates, {} failed", certificates.len(), failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    #[test]
    fn odd_codes_invalid_iff_constant() {
        let c = check_lemma_oddinv(3, 3).unwrap();
        assert!(c.passed());
        assert_eq!(c.counts["examined"], 10);
        assert_eq!(c.counts["invalid"], 1);
        let c = check_lemma_oddinv(5, 4).unwrap();
        assert!(c.passed());
        assert_eq!(c.counts.get("invalid"), None);
        assert_eq!(check_lemma_oddinv(4, 4), Err(Error::EvenLength(4)));
    }

    #[test]
    fn migration_laws_on_chain_codes() {
        let codes = ["1,1,2,1,0,1,0,3,0,0,2", "2,1,1,2,0,1,0,2,1,0,1", "1,2,0,3,0,1,0,1,2,0,1"];
        let c = migration_laws_on(11, 11, codes.iter().map(|s| code(s)));
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.observations["weighted_sums"], json!([10, 2, 5]));
    }

    #[test]
    fn migration_laws_small_cells() {
        assert!(check_migration_laws(3, 3).passed());
        let c = check_migration_laws(7, 5);
        assert!(c.passed());
        assert_eq!(c.counts["examined"], 462);
    }

    #[test]
    fn prime_bijection_certificates() {
        let c = check_prime_bijection(3, 3).unwrap();
        assert!(c.passed());
        assert_eq!(c.counts["pairs"], 4);
        let c = check_prime_bijection(2, 6).unwrap();
        assert!(c.passed());
        assert_eq!(c.counts["pairs"], 4);
        let c = check_prime_bijection(5, 10).unwrap();
        assert!(c.passed());
        assert_eq!(c.counts["pairs"], 201);
        assert_eq!(check_prime_bijection(6, 3), Err(Error::NotPrime(6)));
    }

    #[test]
    fn count_identity_cells() {
        let c = check_count_identity(3, 3).unwrap();
        assert!(c.passed());
        assert_eq!((c.counts["formula"], c.counts["necklaces"], c.counts["codes_t0"]), (4, 4, 4));
        let c = check_count_identity(3, 7).unwrap();
        assert_eq!((c.counts["formula"], c.counts["necklaces"], c.counts["codes_t0"]), (12, 12, 12));
        let c = check_count_identity(4, 2).unwrap();
        assert!(c.passed());
        assert!(c.observations.contains_key("codes_t0_equals_necklaces"));
    }

    #[test]
    fn failing_certificate_has_counterexample() {
        let mut rec = Recorder::new(Check::WeightBounds, 3, 3);
        rec.fail(json!({"code": [1, 1, 1]}));
        let c = rec.finish();
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(!c.counterexamples.is_empty());
    }

    #[test]
    fn envelope_cells() {
        let env = Envelope::default();
        assert_eq!(*env.prime_ks(11).last().unwrap(), 11);
        assert_eq!(*env.prime_ks(7).last().unwrap(), 23);
        assert_eq!(*env.prime_ks(5).last().unwrap(), 56);
        assert_eq!(*env.prime_ks(3).last().unwrap(), 60);
        let cells = env.cells();
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
        assert!(cells.contains(&(8, 8)) && cells.contains(&(11, 11)));
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn certificates_are_deterministic() {
        let a = run_cell(5, 4, &Check::ALL).unwrap();
        let b = run_cell(5, 4, &Check::ALL).unwrap();
        let strip = |v: &[Certificate]| v.iter().map(Certificate::without_timing).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.len(), 7);
    }
}
