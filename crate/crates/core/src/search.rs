//! Exhaustive enumeration of small lattices and backtracking search for
//! residuated multiplications on a fixed lattice.
//!
//! Lattices are generated one element at a time in a height-nondecreasing
//! linear extension: each new element sits on top of a down-set of the
//! elements placed so far, every prefix must be a meet-semilattice, and a
//! top is added last. Isomorphic copies are rejected by a canonical code,
//! the lexicographically least upper-triangular order matrix over
//! permutations that respect a refined structural colouring.
//!
//! Multiplication search fills cells in linear-extension order. A cell whose
//! row or column element is join-reducible is forced by join preservation,
//! so only cells between two join-irreducibles branch. Every complete table
//! is handed to [`derive_residua`](crate::residuation::derive_residua),
//! which shares no code with the search.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::order::{compute_lattice, hasse_covers, inversions, is_boolean, is_complemented, is_distributive};
use crate::order::{FiniteLattice, FinitePoset};
use crate::ortho::{check_ortholattice, OrthoLattice};
use crate::girard::check_downset_unit;
use crate::report::LawReport;
use crate::residuation::{check_associative, MulTable, ResiduatedStructure};

pub const MAX_ENUMERATION_SIZE: usize = 10;
pub const MAX_CONFIRMATION_SIZE: usize = 8;
pub const DEFAULT_UNITAL_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("{what} {got} exceeds the bound {max}")]
    BoundExceeded { what: &'static str, got: usize, max: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filters {
    pub complemented: bool,
    pub orthocomplemented: bool,
    pub non_distributive: bool,
}

impl Filters {
    fn accepts(&self, l: &FiniteLattice) -> bool {
        (!self.complemented || is_complemented(l).0.passed())
            && (!self.non_distributive || is_distributive(l).failed())
            && (!self.orthocomplemented || has_orthocomplement(l))
    }
}

fn has_orthocomplement(l: &FiniteLattice) -> bool {
    inversions(l.poset()).iter().any(|f| check_ortholattice(l, f).passed())
}

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub max_n: usize,
    pub filters: Filters,
    /// Canonically labelled, ordered by size then canonical code.
    pub lattices: Vec<FiniteLattice>,
    /// `counts[k]` is the number of listed lattices with `k + 1` elements.
    pub counts: Vec<usize>,
}

impl EnumerationResult {
    pub fn count(&self, size: usize) -> usize {
        size.checked_sub(1).and_then(|i| self.counts.get(i)).copied().unwrap_or(0)
    }
}

/// All lattices with at most `max_n` elements up to isomorphism, then
/// filtered.
pub fn enumerate_lattices(max_n: usize, filters: Filters) -> Result<EnumerationResult, SearchError> {
    if max_n > MAX_ENUMERATION_SIZE {
        return Err(SearchError::BoundExceeded {
            what: "lattice size",
            got: max_n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let mut lattices = Vec::new();
    let mut counts = Vec::new();
    for m in 1..=max_n {
        let of_size: Vec<FiniteLattice> = lattices_of_size(m).into_iter().filter(|l| filters.accepts(l)).collect();
        counts.push(of_size.len());
        lattices.extend(of_size);
    }
    Ok(EnumerationResult {
        max_n,
        filters,
        lattices,
        counts,
    })
}

/// Unfiltered lattices with exactly `m` elements, one per isomorphism class.
pub fn lattices_of_size(m: usize) -> Vec<FiniteLattice> {
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![compute_lattice(FinitePoset::chain(1)).expect("one element")];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    // down[k]: bitmask of elements ≤ k
    let mut down = vec![1u16];
    let mut height = vec![0usize];
    extend_prefix(m, &mut down, &mut height, &mut |down| {
        let mut full = down.to_vec();
        full.push((1u16 << m) - 1);
        let leq = (0..m * m).map(|c| full[c % m] >> (c / m) & 1 == 1).collect();
        let p = FinitePoset::from_flat(m, leq).expect("generated order is a poset");
        let (code, perm) = canonical_form(&p);
        if seen.insert(code) {
            out.push((code, relabel(&p, &perm)));
        }
    });
    out.sort_by_key(|(code, _)| *code);
    out.into_iter()
        .map(|(_, p)| compute_lattice(p).expect("meet-semilattice with top is a lattice"))
        .collect()
}

fn extend_prefix(m: usize, down: &mut Vec<u16>, height: &mut Vec<usize>, emit: &mut impl FnMut(&[u16])) {
    let k = down.len();
    if k == m - 1 {
        emit(down);
        return;
    }
    let last_height = *height.last().expect("bottom placed");
    // strict down-sets D of the prefix containing the bottom
    for rest in 0u16..(1 << (k - 1)) {
        let d = 1 | (rest << 1);
        if (0..k).any(|i| d >> i & 1 == 1 && down[i] & !d != 0) {
            continue;
        }
        let h = 1 + (0..k).filter(|&i| d >> i & 1 == 1).map(|i| height[i]).max().expect("contains bottom");
        if h < last_height {
            continue;
        }
        let meets_exist = (0..k).all(|i| {
            let common = down[i] & d;
            (0..k).any(|g| common >> g & 1 == 1 && common & !down[g] == 0)
        });
        if !meets_exist {
            continue;
        }
        down.push(d | 1 << k);
        height.push(h);
        extend_prefix(m, down, height, emit);
        down.pop();
        height.pop();
    }
}

fn relabel(p: &FinitePoset, perm: &[usize]) -> FinitePoset {
    let n = p.len();
    let leq = (0..n * n).map(|c| p.leq(perm[c / n], perm[c % n])).collect();
    FinitePoset::from_flat(n, leq).expect("relabelled poset")
}

/// Structural colour classes, refined until stable. Colours sort by height
/// first, so ordering elements by colour gives a linear extension.
fn colours(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let heights = p.heights();
    let covers = hasse_covers(p);
    let below: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| p.leq(y, x)).count()).collect();
    let above: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| p.leq(x, y)).count()).collect();
    let mut keys: Vec<Vec<usize>> = (0..n).map(|x| vec![heights[x], below[x], above[x]]).collect();
    let mut colour = reindex(&keys);
    loop {
        keys = (0..n)
            .map(|x| {
                let mut lower: Vec<usize> = covers.iter().filter(|c| c.1 == x).map(|c| colour[c.0]).collect();
                let mut upper: Vec<usize> = covers.iter().filter(|c| c.0 == x).map(|c| colour[c.1]).collect();
                lower.sort_unstable();
                upper.sort_unstable();
                let mut k = vec![colour[x], lower.len()];
                k.extend(lower);
                k.push(usize::MAX);
                k.extend(upper);
                k
            })
            .collect();
        let next = reindex(&keys);
        let classes = |c: &[usize]| c.iter().collect::<HashSet<_>>().len();
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn reindex(keys: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = keys.iter().collect();
    distinct.sort();
    distinct.dedup();
    keys.iter().map(|k| distinct.binary_search(&k).expect("key present")).collect()
}

/// Canonical code of a poset on at most 11 elements together with the
/// permutation (position → element) that attains it. Isomorphic posets get
/// equal codes.
pub fn canonical_form(p: &FinitePoset) -> (u64, Vec<usize>) {
    let n = p.len();
    assert!(n * n.saturating_sub(1) / 2 <= 64, "canonical code supports at most 11 elements");
    let colour = colours(p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| colour[x]);
    let slot_colour: Vec<usize> = order.iter().map(|&x| colour[x]).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    canon_rec(p, &slot_colour, &colour, &mut perm, &mut used, 0, false, &mut best);
    best.expect("at least one permutation")
}

#[allow(clippy::too_many_arguments)]
fn canon_rec(
    p: &FinitePoset,
    slot_colour: &[usize],
    colour: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    code: u64,
    below_best: bool,
    best: &mut Option<(u64, Vec<usize>)>,
) {
    let n = p.len();
    let pos = perm.len();
    if pos == n {
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, perm.clone()));
        }
        return;
    }
    let total_bits = n * (n - 1) / 2;
    let bits_after = pos * (pos + 1) / 2;
    for x in 0..n {
        if used[x] || colour[x] != slot_colour[pos] {
            continue;
        }
        let row = perm.iter().fold(0u64, |acc, &q| acc << 1 | p.leq(q, x) as u64);
        let next = code << pos | row;
        let mut strict = below_best;
        if !strict {
            if let Some((b, _)) = best.as_ref() {
                let prefix = b >> (total_bits - bits_after);
                if next > prefix {
                    continue;
                }
                strict = next < prefix;
            }
        }
        used[x] = true;
        perm.push(x);
        canon_rec(p, slot_colour, colour, perm, used, next, strict, best);
        perm.pop();
        used[x] = false;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Integral,
    Unital,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Integral => "integral",
            Mode::Unital => "unital",
        })
    }
}

/// Knobs for the backtracking search. The two flags exist for testing the
/// search itself: `skip_associativity` removes a pruning rule (a deliberate
/// mutation) and `reverse_candidates` permutes the branching order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of search nodes; `None` searches exhaustively.
    pub budget: Option<u64>,
    pub skip_associativity: bool,
    pub reverse_candidates: bool,
}

#[derive(Clone, Debug)]
pub struct ResiduationSearchResult {
    pub lattice_id: String,
    pub mode: Mode,
    /// Verified structures, sorted by table.
    pub found: Vec<ResiduatedStructure>,
    /// Complete tables the independent verifier refused. Empty unless the
    /// search has been mutated.
    pub rejected: Vec<MulTable>,
    pub exhausted: bool,
    pub nodes: u64,
    /// Downset-of-unit report per found structure (unital mode only).
    pub downset_reports: Vec<LawReport>,
}

impl ResiduationSearchResult {
    pub fn tables(&self) -> Vec<&MulTable> {
        self.found.iter().map(ResiduatedStructure::mul_table).collect()
    }

    /// Every emitted table passed the verifier and, in integral mode, has
    /// the top as unit.
    pub fn check_verified(&self) -> LawReport {
        const LAW: &str = "search.results-verified";
        if let Some(t) = self.rejected.first() {
            let assoc = check_associative(t);
            let w = assoc.witness.elements().map(<[usize]>::to_vec).unwrap_or_default();
            let r = if w.is_empty() {
                LawReport::fail_at(LAW, t.cells().to_vec())
            } else {
                LawReport::fail_at(LAW, w)
            };
            return r.with_note(format!("{} table(s) rejected by the residua verifier", self.rejected.len()));
        }
        if self.mode == Mode::Integral {
            for s in &self.found {
                let top = s.lattice().map(FiniteLattice::top);
                if s.flags().unit != top {
                    return LawReport::fail_at(LAW, s.mul_table().cells().to_vec()).with_note("unit is not the top");
                }
            }
        }
        LawReport::pass(LAW)
    }
}

/// Short identifier of a lattice's isomorphism class.
pub fn lattice_id(l: &FiniteLattice) -> String {
    format!("L{}-{:x}", l.len(), canonical_form(l.poset()).0)
}

struct Problem<'a> {
    l: &'a FiniteLattice,
    n: usize,
    integral: bool,
    config: SearchConfig,
    /// Cells in filling order.
    cells: Vec<(usize, usize)>,
    /// Two lower covers whose join is the element, for join-reducibles.
    split: Vec<Option<(usize, usize)>>,
}

const UNSET: usize = usize::MAX;

impl<'a> Problem<'a> {
    fn new(l: &'a FiniteLattice, integral: bool, config: SearchConfig) -> Self {
        let n = l.len();
        let ext = l.poset().linear_extension();
        let cells = ext.iter().flat_map(|&x| ext.iter().map(move |&y| (x, y))).collect();
        let covers = hasse_covers(l.poset());
        let split = (0..n)
            .map(|x| {
                let lower: Vec<usize> = covers.iter().filter(|c| c.1 == x).map(|c| c.0).collect();
                (lower.len() >= 2).then(|| (lower[0], lower[1]))
            })
            .collect();
        Problem {
            l,
            n,
            integral,
            config,
            cells,
            split,
        }
    }

    fn candidates(&self, t: &[usize], x: usize, y: usize) -> Vec<usize> {
        let n = self.n;
        let l = self.l;
        let forced = if let Some((a, b)) = self.split[x] {
            Some(l.join(t[a * n + y], t[b * n + y]))
        } else {
            self.split[y].map(|(a, b)| l.join(t[x * n + a], t[x * n + b]))
        };
        let mut c: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => (0..n).collect(),
        };
        if self.integral {
            let m = l.meet(x, y);
            c.retain(|&v| l.leq(v, m));
        }
        if self.config.reverse_candidates {
            c.reverse();
        }
        c
    }

    /// Join preservation in both arguments and associativity, over every
    /// instance whose cells are all assigned.
    fn consistent(&self, t: &[usize]) -> bool {
        let n = self.n;
        let l = self.l;
        let get = |x: usize, y: usize| t[x * n + y];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let j = l.join(y, z);
                    let (a, b, c) = (get(x, y), get(x, z), get(x, j));
                    if a != UNSET && b != UNSET && c != UNSET && c != l.join(a, b) {
                        return false;
                    }
                    let (a, b, c) = (get(y, x), get(z, x), get(j, x));
                    if a != UNSET && b != UNSET && c != UNSET && c != l.join(a, b) {
                        return false;
                    }
                }
            }
        }
        if self.config.skip_associativity {
            return true;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = get(x, y);
                if xy == UNSET {
                    continue;
                }
                for z in 0..n {
                    let yz = get(y, z);
                    if yz == UNSET {
                        continue;
                    }
                    let (lhs, rhs) = (get(xy, z), get(x, yz));
                    if lhs != UNSET && rhs != UNSET && lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Table with the bottom row/column and the unit row/column filled in.
    fn seed(&self, unit: usize) -> Vec<usize> {
        let n = self.n;
        let mut t = vec![UNSET; n * n];
        let bottom = self.l.bottom();
        let mut ok = true;
        let mut put = |t: &mut Vec<usize>, c: usize, v: usize| {
            if t[c] != UNSET && t[c] != v {
                ok = false;
            }
            t[c] = v;
        };
        for x in 0..n {
            put(&mut t, unit * n + x, x);
            put(&mut t, x * n + unit, x);
        }
        for x in 0..n {
            put(&mut t, bottom * n + x, bottom);
            put(&mut t, x * n + bottom, bottom);
        }
        if ok {
            t
        } else {
            Vec::new()
        }
    }
}

struct Outcome {
    tables: Vec<Vec<usize>>,
    nodes: u64,
    complete: bool,
}

fn solve(pb: &Problem, t: &mut Vec<usize>, idx: usize, budget: Option<u64>, out: &mut Outcome) {
    if let Some(b) = budget {
        if out.nodes >= b {
            out.complete = false;
            return;
        }
    }
    out.nodes += 1;
    let mut idx = idx;
    while idx < pb.cells.len() && t[pb.cells[idx].0 * pb.n + pb.cells[idx].1] != UNSET {
        idx += 1;
    }
    if idx == pb.cells.len() {
        out.tables.push(t.clone());
        return;
    }
    let (x, y) = pb.cells[idx];
    for v in pb.candidates(t, x, y) {
        t[x * pb.n + y] = v;
        if pb.consistent(t) {
            solve(pb, t, idx + 1, budget, out);
        }
        t[x * pb.n + y] = UNSET;
        if !out.complete {
            return;
        }
    }
}

/// Runs the search from `seed`. Without a budget the branches of the first
/// free cell are explored in parallel; the merge is sorted, so the result
/// does not depend on scheduling.
fn run(pb: &Problem, seed: Vec<usize>) -> Outcome {
    let mut out = Outcome {
        tables: Vec::new(),
        nodes: 0,
        complete: true,
    };
    if seed.is_empty() || !pb.consistent(&seed) {
        return out;
    }
    let n = pb.n;
    let mut t = seed;
    if pb.config.budget.is_some() {
        solve(pb, &mut t, 0, pb.config.budget, &mut out);
        return out;
    }
    // forced prefix, then fan out at the first cell with several candidates
    let mut idx = 0;
    loop {
        while idx < pb.cells.len() && t[pb.cells[idx].0 * n + pb.cells[idx].1] != UNSET {
            idx += 1;
        }
        if idx == pb.cells.len() {
            out.tables.push(t);
            out.nodes += 1;
            return out;
        }
        let (x, y) = pb.cells[idx];
        let cand = pb.candidates(&t, x, y);
        if cand.len() == 1 {
            t[x * n + y] = cand[0];
            out.nodes += 1;
            if !pb.consistent(&t) {
                return out;
            }
            continue;
        }
        let parts: Vec<Outcome> = cand
            .par_iter()
            .map(|&v| {
                let mut t = t.clone();
                let mut o = Outcome {
                    tables: Vec::new(),
                    nodes: 0,
                    complete: true,
                };
                t[x * n + y] = v;
                if pb.consistent(&t) {
                    solve(pb, &mut t, idx + 1, None, &mut o);
                }
                o
            })
            .collect();
        for p in parts {
            out.nodes += p.nodes;
            out.tables.extend(p.tables);
        }
        return out;
    }
}

fn finish(l: &FiniteLattice, mode: Mode, mut tables: Vec<Vec<usize>>, nodes: u64, complete: bool) -> ResiduationSearchResult {
    tables.sort();
    tables.dedup();
    let mut found = Vec::new();
    let mut rejected = Vec::new();
    for cells in tables {
        let m = MulTable::new(l.len(), cells).expect("search fills every cell in range");
        match ResiduatedStructure::from_lattice(l, m.clone()) {
            Ok(s) => found.push(s),
            Err(_) => rejected.push(m),
        }
    }
    ResiduationSearchResult {
        lattice_id: lattice_id(l),
        mode,
        found,
        rejected,
        exhausted: complete,
        nodes,
        downset_reports: Vec::new(),
    }
}

/// All residuated multiplications on `l` with the top as unit.
pub fn search_integral_residuation(l: &FiniteLattice) -> ResiduationSearchResult {
    search_integral_residuation_with(l, SearchConfig::default())
}

pub fn search_integral_residuation_with(l: &FiniteLattice, config: SearchConfig) -> ResiduationSearchResult {
    let pb = Problem::new(l, true, config);
    let out = run(&pb, pb.seed(l.top()));
    finish(l, Mode::Integral, out.tables, out.nodes, out.complete)
}

/// Residuated multiplications on an ortholattice with any unit, within a
/// node budget. Each hit is checked against the downset-of-unit facts.
pub fn search_unital_residuation(o: &OrthoLattice, budget: u64) -> ResiduationSearchResult {
    search_unital_residuation_with(
        o,
        SearchConfig {
            budget: Some(budget),
            ..SearchConfig::default()
        },
    )
}

pub fn search_unital_residuation_with(o: &OrthoLattice, config: SearchConfig) -> ResiduationSearchResult {
    let l = o.lattice();
    let pb = Problem::new(l, false, config);
    let mut tables = Vec::new();
    let mut nodes = 0;
    let mut complete = true;
    for e in 0..l.len() {
        let remaining = config.budget.map(|b| b.saturating_sub(nodes));
        let sub = Problem {
            config: SearchConfig {
                budget: remaining.or(Some(u64::MAX)),
                ..config
            },
            cells: pb.cells.clone(),
            split: pb.split.clone(),
            ..pb
        };
        let out = run(&sub, sub.seed(e));
        nodes += out.nodes;
        tables.extend(out.tables);
        if !out.complete {
            complete = false;
            break;
        }
    }
    let mut r = finish(l, Mode::Unital, tables, nodes, complete);
    r.downset_reports = r.found.iter().map(|s| check_downset_unit(s, o)).collect();
    r
}

pub const INTEGRAL_IFF_BOOLEAN: &str = "search.integral-iff-boolean";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfirmRow {
    pub size: usize,
    pub lattice_id: String,
    pub boolean: bool,
    pub found: usize,
    /// Every found table is the meet table (hence idempotent).
    pub only_meet: bool,
    pub exhausted: bool,
}

impl ConfirmRow {
    pub fn agrees(&self) -> bool {
        self.exhausted && (self.found > 0) == self.boolean && (!self.boolean || (self.found == 1 && self.only_meet))
    }
}

#[derive(Clone, Debug)]
pub struct Confirmation {
    pub max_n: usize,
    pub rows: Vec<ConfirmRow>,
    /// One report per size `1..=max_n`, over the complemented lattices of
    /// that size.
    pub per_size: Vec<LawReport>,
    pub report: LawReport,
}

/// For every complemented lattice on at most `max_n` elements: an integral
/// residuation exists exactly when the lattice is Boolean, and then the
/// meet is the only one.
pub fn confirm_integral_iff_boolean(max_n: usize, config: SearchConfig) -> Result<Confirmation, SearchError> {
    if max_n > MAX_CONFIRMATION_SIZE {
        return Err(SearchError::BoundExceeded {
            what: "confirmation size",
            got: max_n,
            max: MAX_CONFIRMATION_SIZE,
        });
    }
    let lattices = enumerate_lattices(
        max_n,
        Filters {
            complemented: true,
            ..Filters::default()
        },
    )?;
    let rows: Vec<ConfirmRow> = lattices
        .lattices
        .iter()
        .map(|l| {
            let r = search_integral_residuation_with(l, config);
            let meet = MulTable::meet_of(l);
            ConfirmRow {
                size: l.len(),
                lattice_id: r.lattice_id.clone(),
                boolean: is_boolean(l).passed(),
                found: r.found.len() + r.rejected.len(),
                only_meet: r.found.iter().all(|s| *s.mul_table() == meet && s.flags().idempotent)
                    && r.rejected.is_empty(),
                exhausted: r.exhausted,
            }
        })
        .collect();
    let judge = |rows: &[&ConfirmRow], law: &str| -> LawReport {
        match rows.iter().position(|r| !r.agrees()) {
            None => LawReport::pass(law).with_note(format!("{} complemented lattices", rows.len())),
            Some(i) => {
                let r = rows[i];
                LawReport::fail_at(law, vec![r.size, r.found]).with_note(format!(
                    "{}: boolean={} found={} only-meet={}",
                    r.lattice_id, r.boolean, r.found, r.only_meet
                ))
            }
        }
    };
    let per_size = (1..=max_n)
        .map(|k| {
            let of: Vec<&ConfirmRow> = rows.iter().filter(|r| r.size == k).collect();
            judge(&of, &format!("{INTEGRAL_IFF_BOOLEAN}.size-{k}"))
        })
        .collect();
    let all: Vec<&ConfirmRow> = rows.iter().collect();
    let report = judge(&all, INTEGRAL_IFF_BOOLEAN);
    Ok(Confirmation {
        max_n,
        rows,
        per_size,
        report,
    })
}
