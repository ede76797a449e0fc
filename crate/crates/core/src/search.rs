//! Finite model search for quasigroups satisfying two-variable identities.
//!
//! The search fills a Cayley table one cell at a time, depth first. Every
//! ground instance `(x0, y0)` of every identity is tracked: it is evaluated as
//! far as the partial table allows and parked on the first undefined cell it
//! needs. When that cell gets a value the instance is resumed. An instance
//! whose one side is known and whose other side is a product with a single
//! missing piece forces that piece, using the Latin property to undo a known
//! left or right factor. Cells with a single remaining candidate are filled
//! without branching.
//!
//! Cell choice is minimum remaining values, ties broken by `(row, col)`, and
//! candidate values are tried in ascending order, so results are
//! deterministic. Only branching choices count as nodes.
//!
//! No symmetry breaking is done: identities like `x*(y*(y*x)) = y` are not
//! invariant under isotopy, and counts are exact labelled counts.

use thiserror::Error;

use crate::identity::{Identity, Term, Var};
use crate::table::CayleyTable;

/// Orders above this do not fit the 64-bit candidate masks.
pub const MAX_SEARCH_ORDER: usize = 64;
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    FindOne,
    Count,
    /// Collect up to this many witnesses.
    Enumerate(usize),
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub order: usize,
    pub identities: Vec<Identity>,
    pub require_idempotent: bool,
    /// Row-major partial grid; `None` marks a free cell.
    pub prefilled: Option<Vec<Vec<Option<usize>>>>,
    pub node_budget: u64,
    pub mode: SearchMode,
}

impl SearchSpec {
    pub fn new(order: usize, identities: Vec<Identity>) -> Self {
        SearchSpec {
            order,
            identities,
            require_idempotent: false,
            prefilled: None,
            node_budget: DEFAULT_NODE_BUDGET,
            mode: SearchMode::FindOne,
        }
    }

    pub fn idempotent(mut self, yes: bool) -> Self {
        self.require_idempotent = yes;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn prefilled(mut self, grid: Vec<Vec<Option<usize>>>) -> Self {
        self.prefilled = Some(grid);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchStatus::Found => "FOUND",
            SearchStatus::ExhaustedNone => "EXHAUSTED_NONE",
            SearchStatus::BudgetExceeded => "BUDGET_EXCEEDED",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// In `Count` mode only the first model is kept.
    pub witnesses: Vec<CayleyTable>,
    pub nodes_explored: u64,
    /// Exact number of models, present whenever the tree was fully explored
    /// in `Count` or `Enumerate` mode.
    pub count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
}

impl SearchError {
    pub fn name(&self) -> &'static str {
        "InvalidSpec"
    }
}

/// Re-checks a candidate model against `spec` from scratch.
pub fn verify_witness(t: &CayleyTable, spec: &SearchSpec) -> bool {
    if t.order() != spec.order {
        return false;
    }
    if CayleyTable::from_cells(t.order(), t.cells().to_vec()).is_err() {
        return false;
    }
    if spec.require_idempotent && !t.is_idempotent() {
        return false;
    }
    if let Some(pre) = &spec.prefilled {
        for (x, row) in pre.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                if matches!(v, Some(v) if *v != t.get(x, y)) {
                    return false;
                }
            }
        }
    }
    spec.identities.iter().all(|id| id.check(t).holds)
}

pub fn search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let n = spec.order;
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(SearchError::InvalidSpec(format!(
            "order must be in 1..={MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    if let SearchMode::Enumerate(0) = spec.mode {
        return Err(SearchError::InvalidSpec(
            "enumeration limit must be positive".into(),
        ));
    }
    let mut fixed = Vec::new();
    if let Some(pre) = &spec.prefilled {
        if pre.len() != n || pre.iter().any(|r| r.len() != n) {
            return Err(SearchError::InvalidSpec(format!(
                "prefilled grid must be {n}x{n}"
            )));
        }
        let mut row_seen = vec![0u64; n];
        let mut col_seen = vec![0u64; n];
        for (x, row) in pre.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                let Some(v) = *v else { continue };
                if v >= n {
                    return Err(SearchError::InvalidSpec(format!(
                        "prefilled value {v} at ({x}, {y}) out of range"
                    )));
                }
                let bit = 1u64 << v;
                if row_seen[x] & bit != 0 || col_seen[y] & bit != 0 {
                    return Err(SearchError::InvalidSpec(format!(
                        "prefilled value {v} at ({x}, {y}) repeats in its row or column"
                    )));
                }
                row_seen[x] |= bit;
                col_seen[y] |= bit;
                fixed.push((x * n + y, v as u32));
            }
        }
    }
    if spec.require_idempotent {
        fixed.extend((0..n).map(|x| (x * n + x, x as u32)));
    }

    let mut engine = Engine::new(spec);
    let consistent = engine.start(&fixed);
    if consistent {
        engine.dfs();
    }
    Ok(engine.finish())
}

const EMPTY: u32 = u32::MAX;

enum Eval {
    Val(u32),
    Blocked(u32),
}

enum Force {
    Done,
    Conflict,
    Blocked(u32),
}

enum Undo {
    Assign(u32),
    Watch(u32),
    Taken(u32, Vec<u32>),
}

#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Instance {
    identity: u16,
    x: u8,
    y: u8,
}

struct Engine<'a> {
    spec: &'a SearchSpec,
    n: usize,
    full: u64,
    grid: Vec<u32>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// `row_pos[r * n + v]` is the column holding `v` in row `r`.
    row_pos: Vec<u32>,
    /// `col_pos[c * n + v]` is the row holding `v` in column `c`.
    col_pos: Vec<u32>,
    instances: Vec<Instance>,
    watches: Vec<Vec<u32>>,
    trail: Vec<Undo>,
    queue: Vec<(u32, u32)>,
    nodes: u64,
    out_of_budget: bool,
    /// Set when the mode's goal was met before the tree was exhausted.
    stopped_early: bool,
    models: u64,
    witnesses: Vec<CayleyTable>,
}

impl<'a> Engine<'a> {
    fn new(spec: &'a SearchSpec) -> Self {
        let n = spec.order;
        let instances = (0..spec.identities.len())
            .flat_map(|i| {
                (0..n).flat_map(move |x| {
                    (0..n).map(move |y| Instance {
                        identity: i as u16,
                        x: x as u8,
                        y: y as u8,
                    })
                })
            })
            .collect();
        Engine {
            spec,
            n,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            grid: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            row_pos: vec![EMPTY; n * n],
            col_pos: vec![EMPTY; n * n],
            instances,
            watches: vec![Vec::new(); n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            out_of_budget: false,
            stopped_early: false,
            models: 0,
            witnesses: Vec::new(),
        }
    }

    fn start(&mut self, fixed: &[(usize, u32)]) -> bool {
        for i in 0..self.instances.len() as u32 {
            if !self.process(i) {
                return false;
            }
        }
        self.queue
            .extend(fixed.iter().map(|&(cell, v)| (cell as u32, v)));
        self.propagate()
    }

    fn finish(self) -> SearchOutcome {
        let complete = !self.out_of_budget;
        let status = if !self.witnesses.is_empty() {
            SearchStatus::Found
        } else if complete {
            SearchStatus::ExhaustedNone
        } else {
            SearchStatus::BudgetExceeded
        };
        let status = match (self.spec.mode, complete) {
            (SearchMode::Count, false) => SearchStatus::BudgetExceeded,
            _ => status,
        };
        let count = match self.spec.mode {
            SearchMode::FindOne => None,
            _ if complete && !self.stopped_early => Some(self.models),
            _ => None,
        };
        SearchOutcome {
            status,
            witnesses: self.witnesses,
            nodes_explored: self.nodes,
            count,
        }
    }

    fn eval(&self, term: &Term, x: u32, y: u32) -> Eval {
        match term {
            Term::Var(Var::X) => Eval::Val(x),
            Term::Var(Var::Y) => Eval::Val(y),
            Term::Product(l, r) => {
                let a = match self.eval(l, x, y) {
                    Eval::Val(a) => a,
                    blocked => return blocked,
                };
                let b = match self.eval(r, x, y) {
                    Eval::Val(b) => b,
                    blocked => return blocked,
                };
                let cell = a * self.n as u32 + b;
                match self.grid[cell as usize] {
                    EMPTY => Eval::Blocked(cell),
                    v => Eval::Val(v),
                }
            }
        }
    }

    /// Makes `term` evaluate to `target`, queueing cell assignments where
    /// the value is implied.
    fn force(&mut self, term: &Term, x: u32, y: u32, target: u32) -> Force {
        let n = self.n as u32;
        match term {
            Term::Var(_) => match self.eval(term, x, y) {
                Eval::Val(v) if v == target => Force::Done,
                _ => Force::Conflict,
            },
            Term::Product(l, r) => match (self.eval(l, x, y), self.eval(r, x, y)) {
                (Eval::Val(a), Eval::Val(b)) => {
                    let cell = a * n + b;
                    match self.grid[cell as usize] {
                        EMPTY => {
                            self.queue.push((cell, target));
                            Force::Done
                        }
                        v if v == target => Force::Done,
                        _ => Force::Conflict,
                    }
                }
                (Eval::Val(a), Eval::Blocked(cell)) => {
                    match self.row_pos[(a * n + target) as usize] {
                        EMPTY => Force::Blocked(cell),
                        col => self.force(r, x, y, col),
                    }
                }
                (Eval::Blocked(cell), Eval::Val(b)) => {
                    match self.col_pos[(b * n + target) as usize] {
                        EMPTY => Force::Blocked(cell),
                        row => self.force(l, x, y, row),
                    }
                }
                (Eval::Blocked(cell), Eval::Blocked(_)) => Force::Blocked(cell),
            },
        }
    }

    /// Resumes instance `i`. Returns false on a violated instance.
    fn process(&mut self, i: u32) -> bool {
        let inst = &self.instances[i as usize];
        let (ident, x, y) = (inst.identity as usize, inst.x as u32, inst.y as u32);
        let spec = self.spec;
        let id = &spec.identities[ident];
        let outcome = match (self.eval(&id.lhs, x, y), self.eval(&id.rhs, x, y)) {
            (Eval::Val(a), Eval::Val(b)) => {
                return a == b;
            }
            (Eval::Val(a), Eval::Blocked(_)) => self.force(&id.rhs, x, y, a),
            (Eval::Blocked(_), Eval::Val(b)) => self.force(&id.lhs, x, y, b),
            (Eval::Blocked(cell), Eval::Blocked(_)) => Force::Blocked(cell),
        };
        match outcome {
            Force::Done => true,
            Force::Conflict => false,
            Force::Blocked(cell) => {
                self.watches[cell as usize].push(i);
                self.trail.push(Undo::Watch(cell));
                true
            }
        }
    }

    fn assign(&mut self, cell: u32, v: u32) -> bool {
        let n = self.n;
        let c = cell as usize;
        match self.grid[c] {
            EMPTY => {}
            old => return old == v,
        }
        let (r, col) = (c / n, c % n);
        let bit = 1u64 << v;
        if (self.row_used[r] | self.col_used[col]) & bit != 0 {
            return false;
        }
        self.grid[c] = v;
        self.row_used[r] |= bit;
        self.col_used[col] |= bit;
        self.row_pos[r * n + v as usize] = col as u32;
        self.col_pos[col * n + v as usize] = r as u32;
        self.trail.push(Undo::Assign(cell));

        let waiting = std::mem::take(&mut self.watches[c]);
        let ok = waiting.iter().all(|&i| self.process(i));
        self.trail.push(Undo::Taken(cell, waiting));
        ok
    }

    fn propagate(&mut self) -> bool {
        while let Some((cell, v)) = self.queue.pop() {
            if !self.assign(cell, v) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail longer than mark") {
                Undo::Assign(cell) => {
                    let c = cell as usize;
                    let v = self.grid[c] as usize;
                    let (r, col) = (c / n, c % n);
                    self.grid[c] = EMPTY;
                    self.row_used[r] &= !(1u64 << v);
                    self.col_used[col] &= !(1u64 << v);
                    self.row_pos[r * n + v] = EMPTY;
                    self.col_pos[col * n + v] = EMPTY;
                }
                Undo::Watch(cell) => {
                    self.watches[cell as usize].pop();
                }
                Undo::Taken(cell, list) => {
                    self.watches[cell as usize] = list;
                }
            }
        }
    }

    fn candidates(&self, cell: usize) -> u64 {
        self.full & !(self.row_used[cell / self.n] | self.col_used[cell % self.n])
    }

    /// Empty cell with the fewest candidates; `Err(())` if some cell has none.
    fn pick_cell(&self) -> Result<Option<(usize, u64)>, ()> {
        let mut best: Option<(usize, u64)> = None;
        let mut best_count = u32::MAX;
        for (cell, &v) in self.grid.iter().enumerate() {
            if v != EMPTY {
                continue;
            }
            let cand = self.candidates(cell);
            let count = cand.count_ones();
            if count == 0 {
                return Err(());
            }
            if count < best_count {
                best = Some((cell, cand));
                best_count = count;
                if count == 1 {
                    break;
                }
            }
        }
        Ok(best)
    }

    fn record_model(&mut self) -> Flow {
        let table = CayleyTable::from_cells(self.n, self.grid.clone())
            .expect("complete grid respects the Latin constraints");
        debug_assert!(verify_witness(&table, self.spec));
        self.models += 1;
        match self.spec.mode {
            SearchMode::FindOne => {
                self.witnesses.push(table);
                self.stopped_early = true;
                Flow::Stop
            }
            SearchMode::Count => {
                if self.witnesses.is_empty() {
                    self.witnesses.push(table);
                }
                Flow::Continue
            }
            SearchMode::Enumerate(limit) => {
                self.witnesses.push(table);
                if self.witnesses.len() >= limit {
                    self.stopped_early = true;
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            }
        }
    }

    fn dfs(&mut self) -> Flow {
        let (cell, cand) = loop {
            match self.pick_cell() {
                Err(()) => return Flow::Continue,
                Ok(None) => return self.record_model(),
                Ok(Some((cell, cand))) if cand.count_ones() == 1 => {
                    self.queue.push((cell as u32, cand.trailing_zeros()));
                    if !self.propagate() {
                        return Flow::Continue;
                    }
                }
                Ok(Some(choice)) => break choice,
            }
        };
        let mark = self.trail.len();
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if self.nodes >= self.spec.node_budget {
                self.out_of_budget = true;
                return Flow::Stop;
            }
            self.nodes += 1;
            self.queue.push((cell as u32, v));
            if self.propagate() && self.dfs() == Flow::Stop {
                self.undo_to(mark);
                return Flow::Stop;
            }
            self.undo_to(mark);
        }
        Flow::Continue
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{parse_identity, t2};

    #[test]
    fn order_two_has_no_t2_model() {
        let out = search(&SearchSpec::new(2, vec![t2()]).budget(2)).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert!(out.witnesses.is_empty());
        assert_eq!(out.nodes_explored, 2);
    }

    #[test]
    fn singleton_model() {
        let out = search(&SearchSpec::new(1, vec![t2()])).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.witnesses, vec![CayleyTable::singleton()]);
    }

    #[test]
    fn idempotent_order_five() {
        let spec = SearchSpec::new(5, vec![t2()]).idempotent(true);
        let out = search(&spec).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert!(verify_witness(&out.witnesses[0], &spec));
    }

    #[test]
    fn counts_without_identities_are_latin_square_counts() {
        for (n, latin) in [(1, 1), (2, 2), (3, 12), (4, 576)] {
            let out = search(&SearchSpec::new(n, vec![]).mode(SearchMode::Count)).unwrap();
            assert_eq!(out.count, Some(latin), "order {n}");
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let spec = SearchSpec::new(5, vec![])
            .mode(SearchMode::Count)
            .budget(10);
        let out = search(&spec).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert_eq!(out.count, None);
        assert_eq!(out.nodes_explored, 10);
    }

    #[test]
    fn enumerate_respects_limit() {
        let spec = SearchSpec::new(4, vec![t2()]).mode(SearchMode::Enumerate(3));
        let out = search(&spec).unwrap();
        assert_eq!(out.witnesses.len(), 3);
        assert_eq!(out.count, None);
        let all =
            search(&SearchSpec::new(4, vec![t2()]).mode(SearchMode::Enumerate(1000))).unwrap();
        assert_eq!(all.count, Some(all.witnesses.len() as u64));
    }

    #[test]
    fn prefill_validation() {
        let bad = vec![vec![Some(0), Some(0)], vec![None, None]];
        let err = search(&SearchSpec::new(2, vec![]).prefilled(bad)).unwrap_err();
        assert!(matches!(err, SearchError::InvalidSpec(_)));
        let ok = vec![vec![Some(1), None], vec![None, None]];
        let out = search(&SearchSpec::new(2, vec![]).prefilled(ok.clone())).unwrap();
        assert_eq!(out.witnesses[0].get(0, 0), 1);
        assert!(verify_witness(
            &out.witnesses[0],
            &SearchSpec::new(2, vec![]).prefilled(ok)
        ));
        assert!(search(&SearchSpec::new(0, vec![])).is_err());
        assert!(search(&SearchSpec::new(65, vec![])).is_err());
    }

    #[test]
    fn variable_only_identity_fails_at_root() {
        let id = parse_identity("x = y").unwrap();
        let out = search(&SearchSpec::new(3, vec![id])).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert_eq!(out.nodes_explored, 0);
    }

    #[test]
    fn deterministic_witness() {
        let spec = SearchSpec::new(7, vec![t2()]).idempotent(true);
        let a = search(&spec).unwrap();
        let b = search(&spec).unwrap();
        assert_eq!(a.witnesses, b.witnesses);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }
}
