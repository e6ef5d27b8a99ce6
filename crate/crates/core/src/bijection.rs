//! Neck-classes, riwi-maps, and the code → necklace bijection built from them.
//!
//! A riwi-map is a bijection on the full-period codes of `F_{n,k}` that commutes
//! with rotation and raises the weighted sum by one. Given one, every neck-class
//! `{f, c^q f, ..., c^{n-q} f}` of residue 0 (with `q = n / gcd(n, k)`) is sent
//! term by term to the necklaces of `f, χ f, ..., χ^{n/q - 1} f`; the result is a
//! bijection between full-period codes of residue 0 and full-period necklaces.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_inverse};
use crate::code::{enumerate_codes, Code};
use crate::error::{Error, Result};
use crate::necklace::{canonicalize, Necklace};
use crate::slime;

/// Rotation orbit of a full-period code inside its residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeckClass {
    pub q: usize,
    pub representative: Code,
    /// `rotate(representative, i·q)` for `0 <= i < n/q`.
    pub members: Vec<Code>,
}

/// Stride between the rotations of a code that keep its weighted sum.
pub fn stride(n: usize, k: u64) -> usize {
    n / gcd(n as u64, k) as usize
}

pub fn neck_class(f: &Code) -> Result<NeckClass> {
    neck_class_with(f, Chooser::LexMin)
}

pub fn neck_class_with(f: &Code, chooser: Chooser) -> Result<NeckClass> {
    let n = f.n();
    let period = f.period();
    if period != n {
        return Err(Error::NotFullPeriod { code: f.to_string(), period, n });
    }
    let q = stride(n, f.k());
    let orbit: Vec<Code> = (0..n / q).map(|i| f.rotate((i * q) as i64)).collect();
    let representative = chooser.choose(&orbit);
    let members = (0..n / q).map(|i| representative.rotate((i * q) as i64)).collect();
    Ok(NeckClass { q, representative, members })
}

/// Rule fixing one representative per neck-class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chooser {
    #[default]
    LexMin,
    LexMax,
}

impl Chooser {
    fn choose(self, orbit: &[Code]) -> Code {
        let pick = match self {
            Chooser::LexMin => orbit.iter().min(),
            Chooser::LexMax => orbit.iter().max(),
        };
        pick.expect("orbits are nonempty").clone()
    }

    pub fn name(self) -> &'static str {
        match self {
            Chooser::LexMin => "lexmin",
            Chooser::LexMax => "lexmax",
        }
    }
}

/// A candidate riwi-map on `F'_{n,k}`. Whether a given value really is one is
/// decided by [`verify_riwi`], not assumed.
pub trait RiwiMap: Sync {
    fn apply(&self, f: &Code) -> Result<Code>;
    fn invert(&self, f: &Code) -> Result<Code>;
    /// `slime`, `rotation`, or `custom:<name>`.
    fn descriptor(&self) -> String;
}

fn check_shape(f: &Code, n: usize, k: u64) -> Result<()> {
    if f.n() != n || f.k() != k {
        return Err(Error::WrongShape { code: f.to_string(), n, k });
    }
    Ok(())
}

/// `c^j` for the `j` that raises the weighted sum by one; exists when `gcd(n, k) = 1`.
#[derive(Debug, Clone)]
pub struct RotationPower {
    n: usize,
    k: u64,
    steps: i64,
}

impl RotationPower {
    pub fn steps(&self) -> i64 {
        self.steps
    }
}

impl RiwiMap for RotationPower {
    fn apply(&self, f: &Code) -> Result<Code> {
        check_shape(f, self.n, self.k)?;
        Ok(f.rotate(self.steps))
    }

    fn invert(&self, f: &Code) -> Result<Code> {
        check_shape(f, self.n, self.k)?;
        Ok(f.rotate(-self.steps))
    }

    fn descriptor(&self) -> String {
        "rotation".into()
    }
}

/// The rotation-power riwi-map for coprime `n` and `k`. One rotation lowers
/// the weighted sum by `k`, so the power used is `-k^{-1} mod n`.
pub fn riwi_coprime(n: usize, k: u64) -> Result<RotationPower> {
    if n == 0 || gcd(n as u64, k) != 1 {
        return Err(Error::NotCoprime { n, k });
    }
    let n64 = n as u64;
    let inv = mod_inverse(k % n64, n64).ok_or(Error::NotCoprime { n, k })?;
    let steps = ((n64 - inv) % n64) as i64;
    let map = RotationPower { n, k, steps };
    let sample = enumerate_codes(n, k, None, false).next().expect("F_{n,k} is nonempty");
    if map.apply(&sample)?.weighted_sum() != (sample.weighted_sum() + 1) % n {
        return Err(Error::SelfCheck { map: map.descriptor(), code: sample.to_string() });
    }
    Ok(map)
}

/// φ from slime migration, a riwi-map for odd prime `n`.
#[derive(Debug, Clone)]
pub struct SlimeMigration {
    n: usize,
    k: u64,
}

impl RiwiMap for SlimeMigration {
    fn apply(&self, f: &Code) -> Result<Code> {
        check_shape(f, self.n, self.k)?;
        slime::phi(f)
    }

    fn invert(&self, f: &Code) -> Result<Code> {
        check_shape(f, self.n, self.k)?;
        slime::phi_inverse(f)
    }

    fn descriptor(&self) -> String {
        "slime".into()
    }
}

pub fn riwi_slime(n: usize, k: u64) -> Result<SlimeMigration> {
    if n.is_multiple_of(2) || !is_prime(n as u64) {
        return Err(Error::NotOddPrime(n));
    }
    Ok(SlimeMigration { n, k })
}

/// A map given by an explicit table of code pairs.
#[derive(Debug, Clone)]
pub struct TableMap {
    name: String,
    forward: HashMap<Code, Code>,
    backward: HashMap<Code, Code>,
}

#[derive(Deserialize)]
struct MapEntry {
    from: Vec<u32>,
    to: Vec<u32>,
}

impl TableMap {
    /// Builds the map from `(from, to)` pairs. Repeated `from` entries are
    /// rejected; repeated `to` entries are kept so that verification can
    /// report the map as non-injective.
    pub fn from_pairs(name: &str, pairs: impl IntoIterator<Item = (Code, Code)>) -> Result<Self> {
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for (from, to) in pairs {
            if forward.insert(from.clone(), to.clone()).is_some() {
                return Err(Error::MapFile(format!("code {from} is mapped twice")));
            }
            backward.entry(to).or_insert(from);
        }
        Ok(TableMap { name: name.to_string(), forward, backward })
    }

    /// Parses a JSON array of `{"from": [...], "to": [...]}` objects.
    pub fn from_json(name: &str, json: &str) -> Result<Self> {
        let entries: Vec<MapEntry> =
            serde_json::from_str(json).map_err(|e| Error::MapFile(e.to_string()))?;
        let pairs = entries
            .into_iter()
            .map(|e| Ok((Code::new(e.from)?, Code::new(e.to)?)))
            .collect::<Result<Vec<_>>>()?;
        TableMap::from_pairs(name, pairs)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}

impl RiwiMap for TableMap {
    fn apply(&self, f: &Code) -> Result<Code> {
        self.forward
            .get(f)
            .cloned()
            .ok_or_else(|| Error::MapUndefined { map: self.descriptor(), code: f.to_string() })
    }

    fn invert(&self, f: &Code) -> Result<Code> {
        self.backward
            .get(f)
            .cloned()
            .ok_or_else(|| Error::MapUndefined { map: self.descriptor(), code: f.to_string() })
    }

    fn descriptor(&self) -> String {
        format!("custom:{}", self.name)
    }
}

/// Code → necklace table for `F_{n,k,0}` (or its full-period part).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionTable {
    pub n: usize,
    pub k: u64,
    pub riwi: String,
    pub chooser: Chooser,
    pub pairs: Vec<(Code, Necklace)>,
}

#[derive(Serialize)]
struct PairJson<'a> {
    code: &'a [u32],
    necklace: &'a [u32],
    word: String,
}

#[derive(Serialize)]
struct TableJson<'a> {
    n: usize,
    k: u64,
    riwi: &'a str,
    chooser: &'a str,
    pairs: Vec<PairJson<'a>>,
}

impl Serialize for BijectionTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            n: self.n,
            k: self.k,
            riwi: &self.riwi,
            chooser: self.chooser.name(),
            pairs: self
                .pairs
                .iter()
                .map(|(code, neck)| PairJson {
                    code: code.entries(),
                    necklace: neck.canonical().entries(),
                    word: neck.word().to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl BijectionTable {
    /// CSV with header `code,necklace,word`; code columns use the literal form.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["code", "necklace", "word"]).expect("in-memory write");
        for (code, neck) in &self.pairs {
            writer
                .write_record([code.to_string(), neck.canonical().to_string(), neck.word().to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_text(&self) -> String {
        let width = self.pairs.iter().map(|(c, _)| c.to_string().len()).max().unwrap_or(4).max(4);
        let mut out = format!(
            "# n={} k={} riwi={} chooser={} pairs={}\n",
            self.n,
            self.k,
            self.riwi,
            self.chooser.name(),
            self.pairs.len()
        );
        for (code, neck) in &self.pairs {
            out += &format!("{:<width$}  ->  {}  {}\n", code.to_string(), neck, neck.word());
        }
        out
    }

    pub fn lookup(&self, f: &Code) -> Option<&Necklace> {
        self.pairs.iter().find(|(c, _)| c == f).map(|(_, neck)| neck)
    }
}

/// Maps `rotate(f, i·q)` to the necklace of `χ^i(f)` for every neck-class of
/// `F'_{n,k,0}` with chosen representative `f`. Pairs come out sorted by code.
pub fn build_sigma(n: usize, k: u64, chi: &dyn RiwiMap, chooser: Chooser) -> Result<BijectionTable> {
    let q = stride(n, k);
    let representatives: Vec<Code> = enumerate_codes(n, k, Some(0), true)
        .filter(|f| neck_class_with(f, chooser).map(|c| &c.representative == f).unwrap_or(false))
        .collect();
    let per_class = representatives
        .par_iter()
        .map(|rep| {
            let mut pairs = Vec::with_capacity(n / q);
            let mut image = rep.clone();
            for i in 0..n / q {
                if i > 0 {
                    image = chi.apply(&image)?;
                }
                pairs.push((rep.rotate((i * q) as i64), canonicalize(&image)));
            }
            Ok(pairs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs: Vec<_> = per_class.into_iter().flatten().collect();
    pairs.sort();
    Ok(BijectionTable { n, k, riwi: chi.descriptor(), chooser, pairs })
}

/// Necklace of the `n = 2` code `(x, y)` with `y` even, for even `k`: inverts
/// the rule sending necklace `{a, b}` (`a >= b`) to `(a, b)` when `b` is even
/// and to `(b - 1, a + 1)` otherwise.
fn pair_rule(f: &Code) -> Necklace {
    let (x, y) = (f.entries()[0], f.entries()[1]);
    if x >= y {
        canonicalize(f)
    } else {
        canonicalize(&Code::from_parts(vec![y - 1, x + 1], f.k()))
    }
}

/// The bijection `F_{n,k,0} → N_{n,k}` for prime `n`.
pub fn prime_bijection(n: usize, k: u64) -> Result<BijectionTable> {
    prime_bijection_with(n, k, Chooser::LexMin)
}

pub fn prime_bijection_with(n: usize, k: u64, chooser: Chooser) -> Result<BijectionTable> {
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n));
    }
    if n == 2 {
        if k % 2 == 1 {
            return build_sigma(n, k, &riwi_coprime(n, k)?, chooser);
        }
        let pairs = enumerate_codes(2, k, Some(0), false).map(|f| {
            let neck = pair_rule(&f);
            (f, neck)
        });
        return Ok(BijectionTable {
            n,
            k,
            riwi: "pair-rule".into(),
            chooser,
            pairs: pairs.collect(),
        });
    }
    let mut table = build_sigma(n, k, &riwi_slime(n, k)?, chooser)?;
    // period-1 part: the constant code goes to the constant necklace
    if let Some(constant) = Code::constant(n, k) {
        let neck = canonicalize(&constant);
        table.pairs.push((constant, neck));
        table.pairs.sort();
    }
    Ok(table)
}

/// One way a riwi-map candidate failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiwiViolation {
    ApplyFailed { code: Vec<u32>, reason: String },
    LeavesDomain { code: Vec<u32>, image: Vec<u32> },
    WeightedSum { code: Vec<u32>, image: Vec<u32>, expected: usize, got: usize },
    RoundTrip { code: Vec<u32>, image: Vec<u32>, back: Option<Vec<u32>> },
    NotRotationInvariant { code: Vec<u32>, image_of_rotation: Option<Vec<u32>>, rotated_image: Vec<u32> },
    NotInjective { first: Vec<u32>, second: Vec<u32>, image: Vec<u32> },
    NotSurjective { code: Vec<u32> },
}

/// Counterexamples kept per report; `violations` still counts all of them.
pub const MAX_COUNTEREXAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiwiReport {
    pub map: String,
    pub n: usize,
    pub k: u64,
    pub passed: bool,
    pub examined: usize,
    pub violations: usize,
    pub counterexamples: Vec<RiwiViolation>,
}

fn entries(f: &Code) -> Vec<u32> {
    f.entries().to_vec()
}

/// Checks bijectivity, rotation invariance, and the +1 weighted-sum shift of
/// `chi` on every code of `F'_{n,k}`.
pub fn verify_riwi(chi: &dyn RiwiMap, n: usize, k: u64) -> RiwiReport {
    let domain: Vec<Code> = enumerate_codes(n, k, None, true).collect();
    let in_domain = |g: &Code| g.n() == n && g.k() == k && g.is_full_period();

    let local: Vec<(Option<Code>, Vec<RiwiViolation>)> = domain
        .par_iter()
        .map(|f| {
            let mut bad = Vec::new();
            let image = match chi.apply(f) {
                Ok(g) => g,
                Err(e) => {
                    bad.push(RiwiViolation::ApplyFailed { code: entries(f), reason: e.to_string() });
                    return (None, bad);
                }
            };
            if !in_domain(&image) {
                bad.push(RiwiViolation::LeavesDomain { code: entries(f), image: entries(&image) });
                return (None, bad);
            }
            let expected = (f.weighted_sum() + 1) % n;
            if image.weighted_sum() != expected {
                bad.push(RiwiViolation::WeightedSum {
                    code: entries(f),
                    image: entries(&image),
                    expected,
                    got: image.weighted_sum(),
                });
            }
            let back = chi.invert(&image).ok();
            if back.as_ref() != Some(f) {
                bad.push(RiwiViolation::RoundTrip {
                    code: entries(f),
                    image: entries(&image),
                    back: back.as_ref().map(entries),
                });
            }
            let rotated_image = image.rotate(1);
            let image_of_rotation = chi.apply(&f.rotate(1)).ok();
            if image_of_rotation.as_ref() != Some(&rotated_image) {
                bad.push(RiwiViolation::NotRotationInvariant {
                    code: entries(f),
                    image_of_rotation: image_of_rotation.as_ref().map(entries),
                    rotated_image: entries(&rotated_image),
                });
            }
            (Some(image), bad)
        })
        .collect();

    let mut violations = Vec::new();
    let mut preimage: HashMap<Code, &Code> = HashMap::with_capacity(domain.len());
    for (f, (image, bad)) in domain.iter().zip(local) {
        violations.extend(bad);
        if let Some(image) = image {
            if let Some(first) = preimage.insert(image.clone(), f) {
                violations.push(RiwiViolation::NotInjective {
                    first: entries(first),
                    second: entries(f),
                    image: entries(&image),
                });
            }
        }
    }
    violations.extend(
        domain
            .iter()
            .filter(|g| !preimage.contains_key(*g))
            .map(|g| RiwiViolation::NotSurjective { code: entries(g) }),
    );

    let total = violations.len();
    violations.truncate(MAX_COUNTEREXAMPLES);
    RiwiReport {
        map: chi.descriptor(),
        n,
        k,
        passed: total == 0,
        examined: domain.len(),
        violations: total,
        counterexamples: violations,
    }
}

/// One way a table failed to be a bijection onto the expected sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableViolation {
    DuplicateCode { code: Vec<u32> },
    CodeOutsideDomain { code: Vec<u32> },
    MissingCode { code: Vec<u32> },
    NecklaceHitTwice { necklace: Vec<u32>, first: Vec<u32>, second: Vec<u32> },
    NecklaceOutsideCodomain { necklace: Vec<u32>, code: Vec<u32> },
    MissedNecklace { necklace: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub pairs: usize,
    pub injective: bool,
    pub surjective: bool,
    pub violations: usize,
    pub counterexamples: Vec<TableViolation>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks that `table` is a bijection from exactly `domain` onto exactly `codomain`.
pub fn certify_table(table: &BijectionTable, domain: &[Code], codomain: &[Necklace]) -> TableReport {
    let domain_set: HashMap<&Code, ()> = domain.iter().map(|c| (c, ())).collect();
    let codomain_set: HashMap<&Necklace, ()> = codomain.iter().map(|x| (x, ())).collect();
    let mut seen_codes: HashMap<&Code, ()> = HashMap::new();
    let mut hit: HashMap<&Necklace, &Code> = HashMap::new();
    let mut bad = Vec::new();
    let mut injective = true;

    for (code, neck) in &table.pairs {
        if seen_codes.insert(code, ()).is_some() {
            bad.push(TableViolation::DuplicateCode { code: entries(code) });
        }
        if !domain_set.contains_key(code) {
            bad.push(TableViolation::CodeOutsideDomain { code: entries(code) });
        }
        if !codomain_set.contains_key(neck) {
            bad.push(TableViolation::NecklaceOutsideCodomain {
                necklace: entries(neck.canonical()),
                code: entries(code),
            });
        }
        if let Some(first) = hit.insert(neck, code) {
            injective = false;
            bad.push(TableViolation::NecklaceHitTwice {
                necklace: entries(neck.canonical()),
                first: entries(first),
                second: entries(code),
            });
        }
    }
    bad.extend(
        domain
            .iter()
            .filter(|c| !seen_codes.contains_key(c))
            .map(|c| TableViolation::MissingCode { code: entries(c) }),
    );
    let missed: Vec<_> = codomain
        .iter()
        .filter(|x| !hit.contains_key(x))
        .map(|x| TableViolation::MissedNecklace { necklace: entries(x.canonical()) })
        .collect();
    let surjective = missed.is_empty();
    bad.extend(missed);

    let total = bad.len();
    bad.truncate(MAX_COUNTEREXAMPLES);
    TableReport { pairs: table.pairs.len(), injective, surjective, violations: total, counterexamples: bad }
}

impl fmt::Display for RiwiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} on F'({},{}): {} ({} codes, {} violations)",
            self.map,
            self.n,
            self.k,
            if self.passed { "pass" } else { "FAIL" },
            self.examined,
            self.violations
        )
    }
}
