//! Exhaustive enumeration, classification and countermodel search.
//!
//! [`classify`] runs every checker on one model and refuses to return a
//! record whose flags break the implication chain
//! `GS ⇒ K ⇒ ND ⇒ B ⇒ S(k)`. [`Atlas`] enumerates all models up to a size,
//! classifies them in parallel and merges the results into a deterministic
//! [`ChainReport`] or a [`MinimalSearch`].

mod enumerate;
pub mod predicate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arrow::{arrow_table, entry_is_valid, ArrowEntry};
use crate::distributivity::{
    check_b, check_c_n, check_distributive_lattice, check_dvee_n, check_gs, check_gs_weak, check_k,
    check_lr, check_lr_poset, check_nd, check_sn_range, witness_violates, CheckReport, LabeledWitness, Notion,
    Witness,
};
use crate::ideals::{verify_characterizations, Characterizations};
use crate::order::{JoinSemilattice, Poset};
use crate::set::ElementId;
use crate::{Error, Result};

pub use enumerate::root;
pub use predicate::Predicate;

/// Largest enumeration size accepted by default.
pub const DEFAULT_ATLAS_CAP: usize = 7;

/// Highest arity recorded for the C and DVEE families.
pub const CLUSTER_ARITY: usize = 3;

/// A recorded property of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Notion(Notion),
    DownwardDirected,
    Lattice,
    ArrowTotal,
    /// `Id(J)` is a distributive lattice.
    IdDistributive,
    /// `Id(J) ∪ {∅}` is a distributive lattice.
    IdEmptyDistributive,
    /// `Id_fp(J)` is a distributive lattice.
    IdFpDistributive,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Notion(n) => write!(f, "{n}"),
            Flag::DownwardDirected => f.write_str("DOWNWARD_DIRECTED"),
            Flag::Lattice => f.write_str("LATTICE"),
            Flag::ArrowTotal => f.write_str("ARROW_TOTAL"),
            Flag::IdDistributive => f.write_str("ID_DISTRIBUTIVE"),
            Flag::IdEmptyDistributive => f.write_str("ID_EMPTY_DISTRIBUTIVE"),
            Flag::IdFpDistributive => f.write_str("ID_FP_DISTRIBUTIVE"),
        }
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "DOWNWARD_DIRECTED" | "DD" => Flag::DownwardDirected,
            "LATTICE" => Flag::Lattice,
            "ARROW_TOTAL" => Flag::ArrowTotal,
            "ID_DISTRIBUTIVE" => Flag::IdDistributive,
            "ID_EMPTY_DISTRIBUTIVE" => Flag::IdEmptyDistributive,
            "ID_FP_DISTRIBUTIVE" => Flag::IdFpDistributive,
            _ => Flag::Notion(s.parse().map_err(|_| Error::Predicate(format!("unknown flag `{s}`")))?),
        })
    }
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An undefined arrow entry with its two incomparable maximal candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowCertificate {
    pub a: ElementId,
    pub b: ElementId,
    pub first: ElementId,
    pub second: ElementId,
}

/// Classification of one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRecord {
    pub code: String,
    pub size: usize,
    pub flags: BTreeMap<Flag, bool>,
    pub witnesses: BTreeMap<Flag, Witness>,
    pub arrow_certificates: Vec<ArrowCertificate>,
    pub characterizations: Characterizations,
}

impl SpectrumRecord {
    /// Largest recorded S arity.
    pub fn max_s_arity(&self) -> usize {
        self.size.max(2)
    }

    /// Looks up a flag. Arities beyond the recorded range are answered when
    /// they cannot differ from the largest recorded one.
    pub fn flag(&self, flag: Flag) -> Option<bool> {
        if let Some(&v) = self.flags.get(&flag) {
            return Some(v);
        }
        let clamp = |k: usize, max: usize, mk: fn(usize) -> Notion| {
            (k > max && max >= self.size)
                .then(|| self.flags.get(&Flag::Notion(mk(max))).copied())
                .flatten()
        };
        match flag {
            Flag::Notion(Notion::S(k)) => clamp(k, self.max_s_arity(), Notion::S),
            Flag::Notion(Notion::CN(k)) => clamp(k, CLUSTER_ARITY, Notion::CN),
            Flag::Notion(Notion::DveeN(k)) => clamp(k, CLUSTER_ARITY, Notion::DveeN),
            _ => None,
        }
    }

    fn get(&self, flag: Flag) -> bool {
        self.flags[&flag]
    }

    /// The model this record was computed from, relabelled `0..n-1`.
    pub fn model(&self) -> Result<JoinSemilattice> {
        JoinSemilattice::new(Poset::from_code(&self.code)?)
    }

    /// Each pair of flags that must coincide on finite models, with whether
    /// it does on this one.
    pub fn coincidences(&self) -> Vec<(String, bool)> {
        let n = Flag::Notion;
        let nd = n(Notion::Nd);
        let mut pairs = vec![
            (nd, n(Notion::K)),
            (nd, Flag::ArrowTotal),
            (nd, n(Notion::Lr)),
            (n(Notion::Lr), n(Notion::LrPoset)),
            (n(Notion::GsWeak), Flag::DownwardDirected),
            (n(Notion::Gs), Flag::IdDistributive),
            (n(Notion::K), Flag::IdEmptyDistributive),
            (nd, Flag::IdFpDistributive),
        ];
        for k in 2..=CLUSTER_ARITY {
            pairs.push((nd, n(Notion::CN(k))));
            pairs.push((nd, n(Notion::DveeN(k))));
        }
        for k in 2..self.max_s_arity() {
            pairs.push((n(Notion::S(k)), n(Notion::S(k + 1))));
        }
        let mut out: Vec<(String, bool)> = pairs
            .into_iter()
            .map(|(x, y)| (format!("{x}<=>{y}"), self.get(x) == self.get(y)))
            .collect();
        if self.get(Flag::Lattice) {
            let d = n(Notion::DLattice);
            let mut on_lattice = vec![n(Notion::Gs), n(Notion::K), nd, n(Notion::B)];
            on_lattice.extend((2..=self.max_s_arity()).map(|k| n(Notion::S(k))));
            out.extend(
                on_lattice
                    .into_iter()
                    .map(|x| (format!("LATTICE:{x}<=>{d}"), self.get(x) == self.get(d))),
            );
        }
        out
    }

    /// Witness assignments with element labels taken from `p`.
    pub fn labeled_witnesses(&self, p: &Poset) -> BTreeMap<String, LabeledWitness> {
        self.witnesses
            .iter()
            .map(|(f, w)| (f.to_string(), w.labeled(p)))
            .collect()
    }
}

/// A model whose flags break an implication that holds in every model.
#[derive(Clone, Debug, Serialize)]
pub struct ChainViolation {
    pub rule: String,
    pub record: SpectrumRecord,
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "implication {} fails on model {}", self.rule, self.record.code)
    }
}

fn implications(record: &SpectrumRecord) -> Vec<(Flag, Flag)> {
    let n = Flag::Notion;
    let mut rules = vec![
        (n(Notion::Gs), n(Notion::K)),
        (n(Notion::K), n(Notion::Nd)),
        (n(Notion::Nd), n(Notion::B)),
        (n(Notion::Gs), Flag::DownwardDirected),
    ];
    for k in 2..=record.max_s_arity() {
        rules.push((n(Notion::B), n(Notion::S(k))));
    }
    for k in 2..record.max_s_arity() {
        rules.push((n(Notion::S(k + 1)), n(Notion::S(k))));
    }
    rules
}

/// Runs every checker on `j`.
///
/// Fails with [`Error::ChainViolation`] if the flags break the implication
/// chain; such a record indicates a defect in the checkers.
pub fn classify(j: &JoinSemilattice) -> Result<SpectrumRecord> {
    let size = j.len();
    let mut flags = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let mut put = |r: CheckReport| {
        flags.insert(Flag::Notion(r.notion), r.holds);
        if let Some(w) = r.witness {
            witnesses.insert(Flag::Notion(r.notion), w);
        }
    };
    put(check_gs(j));
    put(check_gs_weak(j));
    put(check_k(j));
    put(check_nd(j));
    put(check_lr(j));
    put(check_lr_poset(j.poset()));
    put(check_b(j));
    for r in check_sn_range(j, size.max(2)) {
        put(r);
    }
    for k in 1..=CLUSTER_ARITY {
        let arity = k.min(size);
        put(CheckReport { notion: Notion::DveeN(k), ..check_dvee_n(j, arity)? });
        put(CheckReport { notion: Notion::CN(k), ..check_c_n(j, arity)? });
    }
    let lattice = j.is_lattice();
    if lattice {
        put(check_distributive_lattice(j)?);
    } else {
        flags.insert(Flag::Notion(Notion::DLattice), false);
    }
    flags.insert(Flag::Lattice, lattice);
    flags.insert(Flag::DownwardDirected, j.is_downward_directed());

    let table = arrow_table(j);
    let arrow_certificates: Vec<ArrowCertificate> = table
        .undefined()
        .filter_map(|(a, b, e)| match e {
            ArrowEntry::Undefined { first, second } => Some(ArrowCertificate { a, b, first, second }),
            ArrowEntry::Defined(_) => None,
        })
        .collect();
    flags.insert(Flag::ArrowTotal, arrow_certificates.is_empty());

    let characterizations = verify_characterizations(j)?;
    flags.insert(Flag::IdDistributive, characterizations.gs.family_distributive);
    flags.insert(Flag::IdEmptyDistributive, characterizations.k.family_distributive);
    flags.insert(Flag::IdFpDistributive, characterizations.nd.family_distributive);

    let record = SpectrumRecord {
        code: j.canonical_code(),
        size,
        flags,
        witnesses,
        arrow_certificates,
        characterizations,
    };
    let broken = implications(&record)
        .into_iter()
        .find(|&(p, q)| record.get(p) && !record.get(q));
    match broken {
        Some((p, q)) => Err(Error::ChainViolation(Box::new(ChainViolation {
            rule: format!("{p} => {q}"),
            record,
        }))),
        None => Ok(record),
    }
}

/// Re-verifies every witness and arrow certificate of `record` against `j`.
/// Returns `(checked, failed)` counts for witnesses and certificates.
pub fn replay_record(j: &JoinSemilattice, record: &SpectrumRecord) -> ReplayCounts {
    let mut counts = ReplayCounts::default();
    for (flag, w) in &record.witnesses {
        counts.witnesses += 1;
        let ok = match flag {
            Flag::Notion(n) => witness_violates(j, *n, w),
            _ => false,
        };
        if !ok {
            counts.witness_failures += 1;
        }
    }
    for c in &record.arrow_certificates {
        counts.certificates += 1;
        let entry = ArrowEntry::Undefined { first: c.first, second: c.second };
        if !entry_is_valid(j, c.a, c.b, entry) {
            counts.certificate_failures += 1;
        }
    }
    counts
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayCounts {
    pub witnesses: usize,
    pub witness_failures: usize,
    pub certificates: usize,
    pub certificate_failures: usize,
}

/// A disjoint piece of the models of one size: the children of one parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationShard {
    pub size: usize,
    /// Canonical code of the parent; empty for the single size-1 shard.
    pub parent: String,
}

/// Per-size totals of a chain verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeSummary {
    pub size: usize,
    pub models: usize,
    /// Models on which each flag holds.
    pub flag_counts: BTreeMap<String, usize>,
    pub chain_violations: usize,
    /// Disagreements per coincidence; every checked coincidence is listed.
    pub disagreements: BTreeMap<String, usize>,
    pub replay: ReplayCounts,
}

impl SizeSummary {
    fn merge(mut self, other: SizeSummary) -> SizeSummary {
        self.models += other.models;
        self.chain_violations += other.chain_violations;
        for (k, v) in other.flag_counts {
            *self.flag_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.disagreements {
            *self.disagreements.entry(k).or_default() += v;
        }
        self.replay.witnesses += other.replay.witnesses;
        self.replay.witness_failures += other.replay.witness_failures;
        self.replay.certificates += other.replay.certificates;
        self.replay.certificate_failures += other.replay.certificate_failures;
        self
    }

    pub fn total_disagreements(&self) -> usize {
        self.disagreements.values().sum()
    }
}

/// One failed check on one model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub code: String,
    pub check: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub max_n: usize,
    pub sizes: Vec<SizeSummary>,
    /// Chain violations, coincidence disagreements and replay failures,
    /// sorted by model code.
    pub findings: Vec<Finding>,
}

impl ChainReport {
    pub fn total_models(&self) -> usize {
        self.sizes.iter().map(|s| s.models).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Search result: all models of the least size satisfying a predicate.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalSearch {
    pub predicate: String,
    pub searched_up_to: usize,
    pub size: Option<usize>,
    pub models: Vec<SpectrumRecord>,
}

/// Enumeration and classification settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub cap: usize,
    /// Worker threads; `0` uses all available cores.
    pub workers: usize,
}

impl Default for Atlas {
    fn default() -> Self {
        Atlas { cap: DEFAULT_ATLAS_CAP, workers: 1 }
    }
}

type Level = Vec<(String, JoinSemilattice)>;

impl Atlas {
    pub fn with_workers(workers: usize) -> Self {
        Atlas { workers, ..Atlas::default() }
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }

    fn next_level(prev: &Level) -> Level {
        let mut level: Level = prev
            .par_iter()
            .flat_map_iter(|(_, parent)| enumerate::children(parent))
            .collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        debug_assert!(level.windows(2).all(|w| w[0].0 != w[1].0), "shards overlap");
        level
    }

    fn first_level() -> Level {
        let r = root();
        vec![(r.canonical_code(), r)]
    }

    /// Calls `visit` with the models of each size `1..=n` in turn, stopping
    /// early when it returns `Some`.
    fn walk<T>(&self, n: usize, mut visit: impl FnMut(usize, &Level) -> Result<Option<T>>) -> Result<Option<T>> {
        let mut level = Self::first_level();
        for size in 1..=n {
            if size > 1 {
                level = Self::next_level(&level);
            }
            if let Some(t) = visit(size, &level)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// All join-semilattices of size `n` up to isomorphism, one per class,
    /// in canonical order and sorted by canonical code.
    pub fn enumerate(&self, n: usize) -> Result<Vec<JoinSemilattice>> {
        self.check_size(n)?;
        self.install(|| {
            let mut out = Vec::new();
            self.walk(n, |size, level| {
                if size == n {
                    out = level.iter().map(|(_, j)| j.clone()).collect();
                }
                Ok(None::<()>)
            })?;
            Ok(out)
        })
    }

    /// The shards whose union is the enumeration of size `n`.
    pub fn shards(&self, n: usize) -> Result<Vec<EnumerationShard>> {
        self.check_size(n)?;
        if n == 1 {
            return Ok(vec![EnumerationShard { size: 1, parent: String::new() }]);
        }
        Ok(self
            .enumerate(n - 1)?
            .iter()
            .map(|p| EnumerationShard { size: n, parent: p.canonical_code() })
            .collect())
    }

    pub fn enumerate_shard(&self, shard: &EnumerationShard) -> Result<Vec<JoinSemilattice>> {
        self.check_size(shard.size)?;
        if shard.parent.is_empty() {
            return Ok(vec![root()]);
        }
        let parent = JoinSemilattice::new(Poset::from_code(&shard.parent)?)?;
        if parent.len() + 1 != shard.size {
            return Err(Error::InvalidCode(shard.parent.clone()));
        }
        Ok(enumerate::children(&parent).into_iter().map(|(_, j)| j).collect())
    }

    /// Classifies every model of every size up to `n` and reports chain
    /// violations, coincidence disagreements and replay failures.
    pub fn verify_chain(&self, n: usize) -> Result<ChainReport> {
        self.check_size(n)?;
        self.install(|| {
            let mut sizes = Vec::new();
            let mut findings = Vec::new();
            self.walk(n, |size, level| {
                let parts: Vec<(SizeSummary, Vec<Finding>)> = level
                    .par_iter()
                    .map(|(_, j)| audit(j))
                    .collect::<Result<_>>()?;
                let mut summary = SizeSummary { size, ..SizeSummary::default() };
                for (s, f) in parts {
                    summary = summary.merge(s);
                    findings.extend(f);
                }
                sizes.push(summary);
                Ok(None::<()>)
            })?;
            findings.sort();
            Ok(ChainReport { max_n: n, sizes, findings })
        })
    }

    /// All models of the least size `<= max_n` satisfying `pred`.
    pub fn find_minimal(&self, pred: &Predicate, max_n: usize) -> Result<MinimalSearch> {
        self.check_size(max_n)?;
        self.install(|| {
            let found = self.walk(max_n, |size, level| {
                let records: Vec<SpectrumRecord> = level
                    .par_iter()
                    .map(|(_, j)| classify(j))
                    .collect::<Result<_>>()?;
                let mut hits = Vec::new();
                for r in records {
                    if pred.eval(&r)? {
                        hits.push(r);
                    }
                }
                Ok((!hits.is_empty()).then_some((size, hits)))
            })?;
            let (size, models) = match found {
                Some((size, models)) => (Some(size), models),
                None => (None, Vec::new()),
            };
            Ok(MinimalSearch {
                predicate: pred.to_string(),
                searched_up_to: max_n,
                size,
                models,
            })
        })
    }
}

/// Classification plus every cross-check, as a one-model summary.
fn audit(j: &JoinSemilattice) -> Result<(SizeSummary, Vec<Finding>)> {
    let mut summary = SizeSummary { size: j.len(), models: 1, ..SizeSummary::default() };
    let mut findings = Vec::new();
    let record = match classify(j) {
        Ok(r) => r,
        Err(Error::ChainViolation(v)) => {
            summary.chain_violations = 1;
            findings.push(Finding { code: v.record.code.clone(), check: v.rule.clone() });
            v.record
        }
        Err(e) => return Err(e),
    };
    for (flag, &v) in &record.flags {
        *summary.flag_counts.entry(flag.to_string()).or_default() += usize::from(v);
    }
    for (name, agrees) in record.coincidences() {
        *summary.disagreements.entry(name.clone()).or_default() += usize::from(!agrees);
        if !agrees {
            findings.push(Finding { code: record.code.clone(), check: name });
        }
    }
    summary.replay = replay_record(j, &record);
    if summary.replay.witness_failures > 0 {
        findings.push(Finding { code: record.code.clone(), check: "witness replay".into() });
    }
    if summary.replay.certificate_failures > 0 {
        findings.push(Finding { code: record.code.clone(), check: "arrow certificate".into() });
    }
    Ok((summary, findings))
}

pub fn enumerate_jsl(n: usize) -> Result<Vec<JoinSemilattice>> {
    Atlas::default().enumerate(n)
}

pub fn verify_chain(n: usize) -> Result<ChainReport> {
    Atlas::default().verify_chain(n)
}

pub fn find_minimal(pred: &Predicate, max_n: usize) -> Result<MinimalSearch> {
    Atlas::default().find_minimal(pred, max_n)
}
