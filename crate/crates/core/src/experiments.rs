//! Theorem-verification sweeps over the catalog.
//!
//! Every verdict a sweep relies on is certified independently of the
//! pair-collapse search: a synchronizing verdict by a word that reduces the
//! whole point set to one point, a non-synchronizing one by a non-null graph
//! that every generator and `f` map edges to edges (no element of the
//! semigroup can then collapse an edge). Counterexamples are additionally
//! rechecked against the brute-force closure when it fits under the cap.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{self, CatalogEntry};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::PermutationGroup;
use crate::perm::{KernelType, PointSet, Transformation};
use crate::semigroup::{self, DEFAULT_CLOSURE_CAP};
use crate::sweep;
use crate::sync;

pub const THEOREM_IDS: &[&str] = &[
    "rystsov",
    "imprimitivity-char",
    "rank-n-2",
    "idempotent-32",
    "rankpres-32",
    "small-ranks",
    "grid-counterexample",
    "no-rank-r-plus-1",
    "split-one-part",
    "lemma41-diagnostic",
];

/// Witness records kept per group; the group summary counts the rest.
const WITNESSES_PER_GROUP: usize = 10;

/// Orbit-size cap for the rank-preserving search.
const SET_ORBIT_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub wall: Duration,
    pub max_instances: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            wall: Duration::from_secs(30 * 60),
            max_instances: u64::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_degree: usize,
    pub budget: Budget,
    pub closure_cap: usize,
}

impl VerifyOptions {
    pub fn new(max_degree: usize) -> Self {
        VerifyOptions {
            max_degree,
            budget: Budget::default(),
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

/// The default `max_degree` for a theorem id.
pub fn default_max_degree(id: &str) -> usize {
    match id {
        "rystsov" => 12,
        "grid-counterexample" => 9,
        _ => 10,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Counterexample,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Counterexample => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Counterexample => "counterexample",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub group: String,
    pub degree: usize,
    pub map: String,
    pub kernel_type: String,
    pub synchronizes: bool,
    pub min_rank: usize,
    pub word_length: Option<usize>,
    /// Edges of `Gr`, 1-based, when the map is not synchronized.
    pub gr_edges: Option<Vec<[usize; 2]>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub degree: usize,
    pub primitive: bool,
    pub instances: u64,
    pub non_synchronizing: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub theorem: String,
    pub max_degree: usize,
    pub status: Status,
    pub instances: u64,
    pub budget_exhausted: bool,
    /// Non-synchronized instances whose `Gr` was checked against
    /// `S ≤ End(Gr)` and clique = chromatic.
    pub structural_checks: u64,
    pub groups: Vec<GroupSummary>,
    pub counterexamples: Vec<InstanceRecord>,
    pub witnesses: Vec<InstanceRecord>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExperimentReport {
    pub fn new(theorem: &str, max_degree: usize) -> Self {
        ExperimentReport {
            theorem: theorem.to_string(),
            max_degree,
            status: Status::Pass,
            instances: 0,
            budget_exhausted: false,
            structural_checks: 0,
            groups: Vec::new(),
            counterexamples: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The engine's view of one instance, with its certificate checked.
#[derive(Debug, Clone)]
pub struct Assessment {
    pub synchronizes: bool,
    pub word: Option<Vec<usize>>,
    pub gr: Graph,
    /// 1 when synchronized, else the clique number of `gr`.
    pub min_rank: usize,
    /// Certificate or structural failures; empty when everything checks.
    pub problems: Vec<String>,
}

fn letters(group: &PermutationGroup, f: &Transformation) -> Vec<Transformation> {
    let mut v = group.generators().to_vec();
    v.push(f.clone());
    v
}

/// Decides the instance and checks the certificate: the greedy word must
/// reduce the point set to one point, or every letter must be an
/// endomorphism of the non-null `Gr` with clique number = chromatic number.
pub fn assess(group: &PermutationGroup, f: &Transformation) -> Result<Assessment> {
    let automaton = sync::collapsible_pairs(group, f)?;
    let mut problems = Vec::new();
    if automaton.is_complete() {
        let word = automaton.greedy_word();
        match &word {
            Some(w) => {
                let image = reduce_set(group, f, w);
                if image.len() != 1 {
                    problems.push(format!("synchronizing word leaves {} points", image.len()));
                }
            }
            None => problems.push("greedy reduction stalled".into()),
        }
        return Ok(Assessment {
            synchronizes: true,
            word,
            gr: Graph::null(f.degree()),
            min_rank: 1,
            problems,
        });
    }
    let gr = automaton.gr();
    for (i, l) in letters(group, f).iter().enumerate() {
        if !gr.is_endomorphism(l)? {
            problems.push(format!("letter {} is not an endomorphism of Gr", i + 1));
        }
    }
    let clique = gr.clique_number();
    let chromatic = gr.chromatic_number();
    if clique != chromatic {
        problems.push(format!("Gr has clique number {clique} but chromatic number {chromatic}"));
    }
    if group.is_primitive() && !gr.is_complete() {
        if let Some(&(v, w)) = gr.equal_neighbourhood_pairs().first() {
            problems.push(format!("points {} and {} have equal neighbourhoods in Gr", v + 1, w + 1));
        }
        if gr.has_clique_plus_pendant(chromatic).is_some() {
            problems.push(format!("Gr contains K{} minus an edge", chromatic + 1));
        }
    }
    Ok(Assessment {
        synchronizes: false,
        word: None,
        gr,
        min_rank: clique,
        problems,
    })
}

fn reduce_set(group: &PermutationGroup, f: &Transformation, word: &[usize]) -> PointSet {
    let k = group.generators().len();
    word.iter().fold(PointSet::full(f.degree()), |set, &l| {
        if l < k {
            group.generators()[l].apply_set(set)
        } else {
            f.apply_set(set)
        }
    })
}

/// Brute-force recheck of a non-synchronized verdict. `Ok(None)` when the
/// closure exceeds the cap.
fn closure_recheck(group: &PermutationGroup, f: &Transformation, gr: &Graph, cap: usize) -> Result<Option<String>> {
    let closure = semigroup::group_closure(group, f, cap)?;
    if closure.truncated() {
        return Ok(None);
    }
    let mut issues = Vec::new();
    if closure.contains_constant()? {
        issues.push("closure contains a constant".to_string());
    }
    if &closure.gr()? != gr {
        issues.push("closure Gr differs".to_string());
    }
    if closure.min_rank()? != gr.clique_number() {
        issues.push(format!(
            "closure min rank {} differs from clique number {}",
            closure.min_rank()?,
            gr.clique_number()
        ));
    }
    Ok(Some(issues.join("; ")))
}

fn edges_1_based(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().map(|(v, w)| [v + 1, w + 1]).collect()
}

struct Sweep {
    report: ExperimentReport,
    start: Instant,
    deadline: Instant,
    max_instances: u64,
    closure_cap: usize,
    group: Option<usize>,
    witnesses_in_group: usize,
}

impl Sweep {
    fn new(id: &str, options: &VerifyOptions) -> Sweep {
        let start = Instant::now();
        Sweep {
            report: ExperimentReport::new(id, options.max_degree),
            start,
            deadline: start + options.budget.wall,
            max_instances: options.budget.max_instances,
            closure_cap: options.closure_cap,
            group: None,
            witnesses_in_group: 0,
        }
    }

    fn begin_group(&mut self, entry: &CatalogEntry) {
        self.report.groups.push(GroupSummary {
            group: entry.name.clone(),
            degree: entry.degree(),
            primitive: entry.group.is_primitive(),
            instances: 0,
            non_synchronizing: 0,
        });
        self.group = Some(self.report.groups.len() - 1);
        self.witnesses_in_group = 0;
    }

    /// Counts an instance; breaks once the budget is spent.
    fn tick(&mut self) -> ControlFlow<()> {
        if self.report.budget_exhausted {
            return ControlFlow::Break(());
        }
        if self.report.instances >= self.max_instances
            || (self.report.instances.is_multiple_of(256) && Instant::now() > self.deadline)
        {
            self.report.budget_exhausted = true;
            return ControlFlow::Break(());
        }
        self.report.instances += 1;
        if let Some(g) = self.group {
            self.report.groups[g].instances += 1;
        }
        ControlFlow::Continue(())
    }

    fn record(&self, entry: &CatalogEntry, f: &Transformation, a: &Assessment, note: String) -> InstanceRecord {
        InstanceRecord {
            group: entry.name.clone(),
            degree: entry.degree(),
            map: f.to_string(),
            kernel_type: f.kernel_type().to_string(),
            synchronizes: a.synchronizes,
            min_rank: a.min_rank,
            word_length: a.word.as_ref().map(Vec::len),
            gr_edges: (!a.synchronizes).then(|| edges_1_based(&a.gr)),
            note,
        }
    }

    fn note_non_sync(&mut self, a: &Assessment) {
        if !a.synchronizes {
            self.report.structural_checks += 1;
            if let Some(g) = self.group {
                self.report.groups[g].non_synchronizing += 1;
            }
        }
    }

    fn counterexample(&mut self, rec: InstanceRecord) {
        self.report.counterexamples.push(rec);
    }

    fn witness(&mut self, rec: InstanceRecord) {
        if self.witnesses_in_group < WITNESSES_PER_GROUP {
            self.report.witnesses.push(rec);
            self.witnesses_in_group += 1;
        }
    }

    /// Assessment with certificate problems already turned into
    /// counterexamples.
    fn assess(&mut self, entry: &CatalogEntry, f: &Transformation) -> Result<Assessment> {
        let a = assess(&entry.group, f)?;
        self.note_non_sync(&a);
        if !a.problems.is_empty() {
            let rec = self.record(entry, f, &a, format!("engine check failed: {}", a.problems.join("; ")));
            self.counterexample(rec);
        }
        Ok(a)
    }

    /// The theorem says `G` synchronizes `f`.
    fn expect_sync(&mut self, entry: &CatalogEntry, f: &Transformation) -> Result<ControlFlow<()>> {
        if self.tick().is_break() {
            return Ok(ControlFlow::Break(()));
        }
        let a = self.assess(entry, f)?;
        if !a.synchronizes {
            let note = match closure_recheck(&entry.group, f, &a.gr, self.closure_cap)? {
                Some(issues) if !issues.is_empty() => format!("not synchronized; closure disagrees: {issues}"),
                Some(_) => "not synchronized (confirmed by closure)".to_string(),
                None => "not synchronized (certified by Gr; closure over cap)".to_string(),
            };
            let rec = self.record(entry, f, &a, note);
            self.counterexample(rec);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// The theorem says `G` fails to synchronize `f`.
    fn expect_non_sync(&mut self, entry: &CatalogEntry, f: &Transformation, note: &str) -> Result<ControlFlow<()>> {
        if self.tick().is_break() {
            return Ok(ControlFlow::Break(()));
        }
        let a = self.assess(entry, f)?;
        if a.synchronizes {
            let rec = self.record(entry, f, &a, format!("{note}: synchronized"));
            self.counterexample(rec);
        } else {
            let check = closure_recheck(&entry.group, f, &a.gr, self.closure_cap)?;
            let suffix = match &check {
                Some(issues) if !issues.is_empty() => {
                    let rec = self.record(entry, f, &a, format!("{note}: closure disagrees: {issues}"));
                    self.counterexample(rec);
                    return Ok(ControlFlow::Continue(()));
                }
                Some(_) => "confirmed by closure",
                None => "certified by Gr; closure over cap",
            };
            let rec = self.record(entry, f, &a, format!("{note} ({suffix})"));
            self.witness(rec);
        }
        Ok(ControlFlow::Continue(()))
    }

    fn finish(mut self) -> ExperimentReport {
        self.report.wall_time = self.start.elapsed();
        self.report.status = if !self.report.counterexamples.is_empty() {
            Status::Counterexample
        } else if self.report.budget_exhausted {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        self.report
    }
}

/// Visits every map representative of every kernel type in `kts`.
fn over_maps(
    group: &PermutationGroup,
    kts: &[KernelType],
    visit: &mut dyn FnMut(&Transformation) -> Result<ControlFlow<()>>,
) -> Result<ControlFlow<()>> {
    let mut err = None;
    for kt in kts {
        let flow = sweep::for_each_map_representative(group, kt, &mut |f| match visit(f) {
            Ok(flow) => flow,
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if flow.is_break() {
            return Ok(ControlFlow::Break(()));
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// The map sending the first `k` points of a block of the largest available
/// system onto the least of them, or `None` if no block has `k` points.
fn block_witness(group: &PermutationGroup, k: usize) -> Result<Option<Transformation>> {
    let Some(system) = group.block_systems().iter().rev().find(|b| b.block_size() >= k) else {
        return Ok(None);
    };
    let block = system.partition().blocks()[0];
    let a_set: PointSet = block.iter().take(k).collect();
    let a = a_set.first().expect("nonempty block");
    crate::graph::witness_map_for_block(system.partition(), a_set, a).map(Some)
}

fn max_block_size(group: &PermutationGroup) -> usize {
    group.block_systems().iter().map(|b| b.block_size()).max().unwrap_or(1)
}

pub fn verify_theorem(id: &str, options: &VerifyOptions) -> Result<ExperimentReport> {
    if !THEOREM_IDS.contains(&id) {
        return Err(Error::UnknownTheorem(id.to_string()));
    }
    let mut sweep = Sweep::new(id, options);
    let catalog = catalog::build_catalog(options.max_degree)?;
    match id {
        "rystsov" => rystsov(&mut sweep, &catalog)?,
        "imprimitivity-char" => imprimitivity(&mut sweep, &catalog)?,
        "rank-n-2" => rank_n_minus_2(&mut sweep, &catalog)?,
        "idempotent-32" => idempotent_32(&mut sweep, &catalog)?,
        "rankpres-32" => rankpres_32(&mut sweep, &catalog)?,
        "small-ranks" => small_ranks(&mut sweep, &catalog)?,
        "grid-counterexample" => grid_counterexample(&mut sweep)?,
        "no-rank-r-plus-1" | "split-one-part" => closure_sweep(&mut sweep, &catalog, id == "split-one-part")?,
        "lemma41-diagnostic" => lemma41(&mut sweep, &catalog)?,
        _ => unreachable!("id checked above"),
    }
    Ok(sweep.finish())
}

fn rystsov(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    for entry in catalog.iter().filter(|e| e.group.is_transitive() && e.degree() >= 2) {
        sweep.begin_group(entry);
        let n = entry.degree();
        if entry.group.is_primitive() {
            let kt = KernelType::with_ones(&[2], n)?;
            if over_maps(&entry.group, &[kt], &mut |f| sweep.expect_sync(entry, f))?.is_break() {
                break;
            }
        } else {
            let f = block_witness(&entry.group, 2)?.expect("imprimitive groups have a block of size at least 2");
            if sweep.expect_non_sync(entry, &f, "rank n-1 map collapsing two points of a block")?.is_break() {
                break;
            }
        }
    }
    Ok(())
}

fn imprimitivity(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    'groups: for entry in catalog.iter().filter(|e| e.group.is_transitive() && e.degree() >= 3) {
        sweep.begin_group(entry);
        let n = entry.degree();
        let largest = if entry.group.is_primitive() { 1 } else { max_block_size(&entry.group) };
        for k in 2..n {
            let flow = if k <= largest {
                let f = block_witness(&entry.group, k)?.expect("block of size at least k");
                sweep.expect_non_sync(entry, &f, &format!("k = {k} points of one block collapsed"))?
            } else {
                let kt = KernelType::with_ones(&[k], n)?;
                over_maps(&entry.group, &[kt], &mut |f| sweep.expect_sync(entry, f))?
            };
            if flow.is_break() {
                break 'groups;
            }
        }
    }
    Ok(())
}

fn primitive_entries(catalog: &[CatalogEntry], min_degree: usize) -> impl Iterator<Item = &CatalogEntry> {
    catalog
        .iter()
        .filter(move |e| e.group.is_primitive() && e.degree() >= min_degree)
}

fn rank_n_minus_2(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    for entry in primitive_entries(catalog, 3) {
        sweep.begin_group(entry);
        let n = entry.degree();
        let kts = KernelType::all_of_rank(n, n - 2);
        if over_maps(&entry.group, &kts, &mut |f| sweep.expect_sync(entry, f))?.is_break() {
            break;
        }
    }
    Ok(())
}

fn idempotent_32(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    // Conjugation preserves idempotency and moves the kernel along its
    // orbit, so one kernel per orbit suffices.
    'groups: for entry in primitive_entries(catalog, 5) {
        sweep.begin_group(entry);
        let kt = KernelType::with_ones(&[3, 2], entry.degree())?;
        for kernel in sweep::kernel_orbit_representatives(&entry.group, &kt) {
            for e in sweep::idempotents_with_kernel(&kernel) {
                if sweep.expect_sync(entry, &e)?.is_break() {
                    break 'groups;
                }
            }
        }
    }
    Ok(())
}

fn rankpres_32(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    let mut skipped = 0u64;
    for entry in primitive_entries(catalog, 5) {
        sweep.begin_group(entry);
        let kt = KernelType::with_ones(&[3, 2], entry.degree())?;
        let flow = over_maps(&entry.group, &[kt], &mut |f| {
            if semigroup::find_rank_preserving_g(&entry.group, f, SET_ORBIT_CAP)?.is_none() {
                skipped += 1;
                return Ok(ControlFlow::Continue(()));
            }
            sweep.expect_sync(entry, f)
        })?;
        if flow.is_break() {
            break;
        }
    }
    sweep
        .report
        .notes
        .push(format!("{skipped} maps had no g with rank(fgf) = rank(f) and were skipped"));
    Ok(())
}

fn small_ranks(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    for entry in primitive_entries(catalog, 3) {
        sweep.begin_group(entry);
        let n = entry.degree();
        let mut kts = KernelType::all_of_rank(n, 2);
        for r in [3, 4] {
            if r < n {
                kts.extend(KernelType::all_of_rank(n, r).into_iter().filter(|kt| !kt.is_uniform()));
            }
        }
        if over_maps(&entry.group, &kts, &mut |f| sweep.expect_sync(entry, f))?.is_break() {
            break;
        }
    }
    Ok(())
}

/// The diagonal projection of the 3 × 3 grid whose kernel classes are the rows.
pub fn grid_projection() -> Transformation {
    Transformation::new((0..9).map(|x| 4 * (x / 3)).collect()).expect("valid map")
}

fn grid_counterexample(sweep: &mut Sweep) -> Result<()> {
    let entry = catalog::grid(3)?;
    sweep.begin_group(&entry);
    let f = grid_projection();
    if sweep.tick().is_break() {
        return Ok(());
    }
    let a = sweep.assess(&entry, &f)?;
    let gr = &a.gr;
    let mut failures = Vec::new();
    if a.synchronizes {
        failures.push("the projection is synchronized".to_string());
    }
    if gr.edge_count() != 18 {
        failures.push(format!("Gr has {} edges, not 18", gr.edge_count()));
    }
    if gr.is_regular() != Some(4) {
        failures.push("Gr is not 4-regular".to_string());
    }
    let (clique, chromatic) = (gr.clique_number(), gr.chromatic_number());
    if clique != 3 || chromatic != 3 {
        failures.push(format!("clique {clique}, chromatic {chromatic}"));
    }
    match closure_recheck(&entry.group, &f, gr, sweep.closure_cap)? {
        Some(issues) if !issues.is_empty() => failures.push(issues),
        Some(_) => {}
        None => failures.push("closure over cap".to_string()),
    }
    if !gr.equal_neighbourhood_pairs().is_empty() {
        failures.push("two vertices share a neighbourhood".to_string());
    }
    if gr.has_clique_plus_pendant(3).is_some() {
        failures.push("Gr contains K4 minus an edge".to_string());
    }
    if !entry.group.is_primitive() {
        failures.push("grid group is not primitive".to_string());
    }
    let rec = sweep.record(
        &entry,
        &f,
        &a,
        if failures.is_empty() {
            "non-synchronized; Gr 4-regular, 18 edges, clique = chromatic = min rank = 3".to_string()
        } else {
            failures.join("; ")
        },
    );
    if failures.is_empty() {
        sweep.witness(rec);
    } else {
        sweep.counterexample(rec);
    }
    Ok(())
}

/// All non-permutation, non-constant kernel types of degree `n`.
fn all_kernel_types(n: usize) -> Vec<KernelType> {
    (2..n).rev().flat_map(|r| KernelType::all_of_rank(n, r)).collect()
}

/// Sweeps every map of every primitive group, and for each non-synchronized
/// one checks the rank structure of its closure: no rank `r + 1` element, or
/// no element of rank above `r` with `r - 1` kernel parts of size `n / r`.
fn closure_sweep(sweep: &mut Sweep, catalog: &[CatalogEntry], split_one_part: bool) -> Result<()> {
    let mut truncated = 0u64;
    let mut closures = 0u64;
    let cap = sweep.closure_cap;
    for entry in primitive_entries(catalog, 3) {
        sweep.begin_group(entry);
        let n = entry.degree();
        let flow = over_maps(&entry.group, &all_kernel_types(n), &mut |f| {
            if sweep.tick().is_break() {
                return Ok(ControlFlow::Break(()));
            }
            let a = sweep.assess(entry, f)?;
            if a.synchronizes {
                return Ok(ControlFlow::Continue(()));
            }
            let closure = semigroup::group_closure(&entry.group, f, cap)?;
            if closure.truncated() {
                truncated += 1;
                return Ok(ControlFlow::Continue(()));
            }
            closures += 1;
            let r = closure.min_rank()?;
            let mut problem = None;
            if r != a.min_rank {
                problem = Some(format!("closure min rank {r} but Gr clique number {}", a.min_rank));
            } else if let Some(p) = minimal_rank_problem(&entry.group, &closure, &a.gr, r)? {
                problem = Some(p);
            } else if !split_one_part {
                if closure.rank_spectrum()?.contains(&(r + 1)) {
                    problem = Some(format!("closure contains an element of rank {}", r + 1));
                }
            } else if n % r == 0 {
                let part = n / r;
                problem = closure
                    .elements()
                    .find(|h| h.rank() > r && h.kernel_type().sizes().iter().filter(|&&s| s == part).count() == r - 1)
                    .map(|h| format!("element {h} of rank {} has {} parts of size {part}", h.rank(), r - 1));
            }
            let rec = sweep.record(entry, f, &a, problem.clone().unwrap_or_else(|| format!("min rank {r}")));
            if problem.is_some() {
                sweep.counterexample(rec);
            } else {
                sweep.witness(rec);
            }
            Ok(ControlFlow::Continue(()))
        })?;
        if flow.is_break() {
            break;
        }
    }
    sweep
        .report
        .notes
        .push(format!("{closures} closures of non-synchronized instances checked"));
    if truncated > 0 {
        sweep
            .report
            .notes
            .push(format!("{truncated} closures exceeded the cap and were skipped"));
    }
    Ok(())
}

/// Minimal-rank elements of a non-synchronizing closure of a primitive group
/// are uniform, their images are sections of their kernels under the
/// group, and the orbital graph of each such kernel avoids the edges of `Gr`.
fn minimal_rank_problem(
    group: &PermutationGroup,
    closure: &semigroup::SemigroupClosure,
    gr: &Graph,
    r: usize,
) -> Result<Option<String>> {
    let mut kernels = std::collections::BTreeSet::new();
    for h in closure.elements().filter(|h| h.rank() == r) {
        if !h.is_uniform() {
            return Ok(Some(format!("minimal-rank element {h} is not uniform")));
        }
        let kernel = h.kernel();
        if !semigroup::is_g_section(group, h.image_set(), &kernel, SET_ORBIT_CAP)? {
            return Ok(Some(format!("image of {h} is not a section of its kernel under G")));
        }
        if kernels.insert(kernel.labels().to_vec()) {
            let delta = semigroup::neumann_delta(group, &kernel)?;
            let shared = delta.edges().find(|&(v, w)| gr.has_edge(v, w));
            if let Some((v, w)) = shared {
                return Ok(Some(format!("orbital graph of ker {h} shares the edge {}-{} with Gr", v + 1, w + 1)));
            }
        }
    }
    Ok(None)
}

/// Checks on `Gr` restricted to the two non-singleton kernel classes `A`,
/// `B`: a path on four vertices inside `A ∪ B`, every point of `A ∪ B` with a
/// neighbour in `A ∪ B`, and no two points of one class whose only neighbour
/// in the other class is the same point.
pub fn lemma41_violations(gr: &Graph, a: PointSet, b: PointSet) -> Vec<String> {
    let k = a.union(b);
    let mut out = Vec::new();
    for v in k.iter() {
        if gr.neighbours(v).intersection(k).is_empty() {
            out.push(format!("point {} has no neighbour in A ∪ B", v + 1));
        }
    }
    for (side, other) in [(a, b), (b, a)] {
        let single: Vec<(usize, usize)> = side
            .iter()
            .filter_map(|v| {
                let nb = gr.neighbours(v).intersection(other);
                (nb.len() == 1).then(|| (v, nb.first().expect("one neighbour")))
            })
            .collect();
        for (i, &(v, x)) in single.iter().enumerate() {
            if let Some(&(w, _)) = single[i + 1..].iter().find(|&&(_, y)| y == x) {
                out.push(format!("points {} and {} have the single common neighbour {}", v + 1, w + 1, x + 1));
            }
        }
    }
    if !has_path_on_four(gr, k) {
        out.push("no path on four vertices inside A ∪ B".to_string());
    }
    out
}

fn has_path_on_four(gr: &Graph, within: PointSet) -> bool {
    within.iter().any(|a| {
        gr.neighbours(a).intersection(within).iter().any(|b| {
            gr.neighbours(b).intersection(within).iter().filter(|&c| c != a).any(|c| {
                gr.neighbours(c)
                    .intersection(within)
                    .iter()
                    .any(|d| d != a && d != b)
            })
        })
    })
}

fn lemma41(sweep: &mut Sweep, catalog: &[CatalogEntry]) -> Result<()> {
    for entry in primitive_entries(catalog, 5) {
        sweep.begin_group(entry);
        let n = entry.degree();
        let mut kts = Vec::new();
        for p in 2..n {
            for q in 2..=p.min(n - p) {
                kts.push(KernelType::with_ones(&[p, q], n)?);
            }
        }
        let flow = over_maps(&entry.group, &kts, &mut |f| {
            if sweep.tick().is_break() {
                return Ok(ControlFlow::Break(()));
            }
            let a = sweep.assess(entry, f)?;
            if a.synchronizes {
                return Ok(ControlFlow::Continue(()));
            }
            let kernel = f.kernel();
            let mut big = kernel.blocks().iter().copied().filter(|b| b.len() >= 2);
            let (ka, kb) = (big.next().expect("two classes"), big.next().expect("two classes"));
            let problems = lemma41_violations(&a.gr, ka, kb);
            let rec = sweep.record(entry, f, &a, problems.join("; "));
            if problems.is_empty() {
                sweep.witness(rec);
            } else {
                sweep.counterexample(rec);
            }
            Ok(ControlFlow::Continue(()))
        })?;
        if flow.is_break() {
            break;
        }
    }
    if sweep.report.witnesses.is_empty() && sweep.report.counterexamples.is_empty() {
        sweep
            .report
            .notes
            .push("no non-synchronized instance with two non-singleton kernel classes was found".to_string());
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub max_degree: usize,
    pub degree: Option<usize>,
    pub rank: Option<usize>,
    pub kernel_type: Option<KernelType>,
    pub include_imprimitive: bool,
    pub budget: Budget,
}

/// A free sweep that asserts nothing: every non-synchronized instance of
/// the selected groups and kernel types is listed as a witness.
pub fn scan(options: &ScanOptions) -> Result<ExperimentReport> {
    let verify = VerifyOptions {
        max_degree: options.max_degree,
        budget: options.budget,
        closure_cap: DEFAULT_CLOSURE_CAP,
    };
    let mut sweep = Sweep::new("scan", &verify);
    let catalog = catalog::build_catalog(options.max_degree)?;
    for entry in catalog.iter().filter(|e| {
        (options.include_imprimitive || e.group.is_primitive())
            && e.degree() >= 3
            && options.degree.is_none_or(|d| d == e.degree())
    }) {
        let n = entry.degree();
        let kts: Vec<KernelType> = match &options.kernel_type {
            Some(kt) if kt.degree() == n => vec![kt.clone()],
            Some(_) => continue,
            None => match options.rank {
                Some(r) if r >= 1 && r < n => KernelType::all_of_rank(n, r),
                Some(_) => continue,
                None => all_kernel_types(n),
            },
        };
        sweep.begin_group(entry);
        let flow = over_maps(&entry.group, &kts, &mut |f| {
            if sweep.tick().is_break() {
                return Ok(ControlFlow::Break(()));
            }
            let a = sweep.assess(entry, f)?;
            if !a.synchronizes {
                let rec = sweep.record(entry, f, &a, String::new());
                sweep.witness(rec);
            }
            Ok(ControlFlow::Continue(()))
        })?;
        if flow.is_break() {
            break;
        }
    }
    Ok(sweep.finish())
}

/// Pairs `(f, g)` with `rank(f g f) = rank(f)`, with `f` ranging over map
/// representatives of the catalog groups; at most `per_group` from each.
pub fn harvest_rank_preserving_pairs(
    max_degree: usize,
    per_group: usize,
    limit: usize,
) -> Result<Vec<(Transformation, Transformation)>> {
    let mut out = Vec::new();
    for entry in catalog::build_catalog(max_degree)?.iter().filter(|e| e.degree() >= 3) {
        let n = entry.degree();
        let mut taken = 0;
        let mut err = None;
        'types: for kt in all_kernel_types(n) {
            let flow = sweep::for_each_map_representative(&entry.group, &kt, &mut |f| {
                match semigroup::find_rank_preserving_g(&entry.group, f, SET_ORBIT_CAP) {
                    Ok(Some(g)) => {
                        out.push((f.clone(), g));
                        taken += 1;
                    }
                    Ok(None) => {}
                    Err(e) => {
                        err = Some(e);
                        return ControlFlow::Break(());
                    }
                }
                if taken >= per_group || out.len() >= limit {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let Some(e) = err.take() {
                return Err(e);
            }
            if flow.is_break() {
                break 'types;
            }
        }
        if out.len() >= limit {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(id: &str, max_degree: usize) -> ExperimentReport {
        verify_theorem(id, &VerifyOptions::new(max_degree)).unwrap()
    }

    #[test]
    fn grid_counterexample_passes() {
        let r = quick("grid-counterexample", 9);
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].gr_edges.as_ref().unwrap().len(), 18);
    }

    #[test]
    fn small_sweeps_pass() {
        for id in ["rystsov", "imprimitivity-char", "rank-n-2", "idempotent-32", "rankpres-32", "small-ranks"] {
            let r = quick(id, 7);
            assert!(r.passed(), "{id}: {:?}", r.counterexamples);
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(
            verify_theorem("nope", &VerifyOptions::new(5)),
            Err(Error::UnknownTheorem(_))
        ));
    }

    #[test]
    fn instance_budget_makes_runs_inconclusive() {
        let mut o = VerifyOptions::new(7);
        o.budget.max_instances = 3;
        let r = verify_theorem("rank-n-2", &o).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.instances, 3);
    }

    #[test]
    fn lemma41_condition_checks() {
        // A = {1,2}, B = {3,4}: the 4-cycle 1-3-2-4-1 satisfies everything.
        let mut g = Graph::null(6);
        for (v, w) in [(0, 2), (2, 1), (1, 3), (3, 0)] {
            g.add_edge(v, w);
        }
        let a: PointSet = [0, 1].into_iter().collect();
        let b: PointSet = [2, 3].into_iter().collect();
        assert!(lemma41_violations(&g, a, b).is_empty());
        // A matching: 1-3 and 2-4 only; no path on four vertices.
        let mut m = Graph::null(6);
        m.add_edge(0, 2);
        m.add_edge(1, 3);
        assert!(!lemma41_violations(&m, a, b).is_empty());
        // Points 1 and 2 both see only 3.
        let mut s = Graph::null(6);
        s.add_edge(0, 2);
        s.add_edge(1, 2);
        s.add_edge(3, 2);
        assert!(!lemma41_violations(&s, a, b).is_empty());
    }

    #[test]
    fn harvest_finds_pairs() {
        let pairs = harvest_rank_preserving_pairs(6, 5, 40).unwrap();
        assert!(!pairs.is_empty());
        for (f, g) in &pairs {
            assert_eq!(f.then(g).then(f).rank(), f.rank());
        }
    }
}
