//! Which orders admit T2-quasigroups, and constructions that build new orders
//! from old ones: direct products, the `2^k` family and composition along a
//! pairwise balanced design.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith::gcd;
use crate::fixtures;
use crate::identity::{t2, Identity};
use crate::modular::all_t2_forms;
use crate::search::{search, verify_witness, SearchSpec, SearchStatus, MAX_SEARCH_ORDER};
use crate::table::{CayleyTable, TableError, DEFAULT_MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("malformed design text at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("lambda must be positive")]
    ZeroLambda,
    #[error("block {block} contains point {point}, outside 0..{v}")]
    PointOutOfRange {
        block: usize,
        point: usize,
        v: usize,
    },
    #[error("block {block} has fewer than two points")]
    BlockTooSmall { block: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("pair {{{a}, {b}}} lies in {count} blocks, expected {lambda}")]
    PairCoverage {
        a: usize,
        b: usize,
        count: usize,
        lambda: usize,
    },
    #[error("composition needs lambda = 1, got {0}")]
    LambdaUnsupported(usize),
    #[error("no model supplied for blocks of size {0}")]
    MissingBlockModel(usize),
    #[error("model for block size {size} has order {order}")]
    ModelOrderMismatch { size: usize, order: usize },
    #[error("model for block size {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("model for block size {size} violates {identity}")]
    ModelViolatesIdentity { size: usize, identity: String },
    #[error("2^{0} is not a supported exponent")]
    Unrepresentable(u32),
    #[error("empty block size set")]
    EmptySizeSet,
    #[error(transparent)]
    Table(#[from] TableError),
}

impl SpectrumError {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumError::Parse { .. } => "ParseError",
            SpectrumError::ZeroLambda => "ZeroLambda",
            SpectrumError::PointOutOfRange { .. } => "PointOutOfRange",
            SpectrumError::BlockTooSmall { .. } => "BlockTooSmall",
            SpectrumError::RepeatedPoint { .. } => "RepeatedPoint",
            SpectrumError::PairCoverage { .. } => "PairCoverage",
            SpectrumError::LambdaUnsupported(_) => "LambdaUnsupported",
            SpectrumError::MissingBlockModel(_) => "MissingBlockModel",
            SpectrumError::ModelOrderMismatch { .. } => "ModelOrderMismatch",
            SpectrumError::NotIdempotent(_) => "NotIdempotent",
            SpectrumError::ModelViolatesIdentity { .. } => "ModelViolatesIdentity",
            SpectrumError::Unrepresentable(_) => "Unrepresentable",
            SpectrumError::EmptySizeSet => "EmptySizeSet",
            SpectrumError::Table(e) => e.name(),
        }
    }
}

/// A pairwise balanced design on points `0..v`: every pair of distinct
/// points lies in exactly `lambda` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pbd {
    v: usize,
    blocks: Vec<Vec<usize>>,
    lambda: usize,
}

impl Pbd {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>, lambda: usize) -> Result<Self, SpectrumError> {
        if lambda == 0 {
            return Err(SpectrumError::ZeroLambda);
        }
        if v > DEFAULT_MAX_ORDER {
            return Err(TableError::OrderTooLarge {
                order: v,
                max: DEFAULT_MAX_ORDER,
            }
            .into());
        }
        // upper triangle, row a holds pairs (a, b) with b > a
        let tri = |a: usize, b: usize| a * v - a * (a + 1) / 2 + (b - a - 1);
        let mut cover = vec![0u32; v * v.saturating_sub(1) / 2];
        for (bi, block) in blocks.iter().enumerate() {
            if block.len() < 2 {
                return Err(SpectrumError::BlockTooSmall { block: bi });
            }
            let mut seen = BTreeSet::new();
            for &p in block {
                if p >= v {
                    return Err(SpectrumError::PointOutOfRange {
                        block: bi,
                        point: p,
                        v,
                    });
                }
                if !seen.insert(p) {
                    return Err(SpectrumError::RepeatedPoint {
                        block: bi,
                        point: p,
                    });
                }
            }
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    cover[tri(a.min(b), a.max(b))] += 1;
                }
            }
        }
        for a in 0..v {
            for b in a + 1..v {
                let count = cover[tri(a, b)] as usize;
                if count != lambda {
                    return Err(SpectrumError::PairCoverage {
                        a,
                        b,
                        count,
                        lambda,
                    });
                }
            }
        }
        Ok(Pbd { v, blocks, lambda })
    }

    /// The design with the whole point set as its only block.
    pub fn trivial(v: usize) -> Self {
        let blocks = if v >= 2 {
            vec![(0..v).collect()]
        } else {
            vec![]
        };
        Pbd {
            v,
            blocks,
            lambda: 1,
        }
    }

    /// Lines of the affine plane over `Z_q`, `q` prime: points `(x, y)` are
    /// numbered `x * q + y`; blocks are the `q^2` lines `y = m x + c` followed
    /// by the `q` vertical lines `x = c`.
    pub fn affine_plane(q: usize) -> Self {
        assert!(
            q >= 2 && crate::arith::is_prime(q as u64),
            "q must be prime"
        );
        let mut blocks = Vec::with_capacity(q * q + q);
        for m in 0..q {
            for c in 0..q {
                blocks.push((0..q).map(|x| x * q + (m * x + c) % q).collect());
            }
        }
        for c in 0..q {
            blocks.push((0..q).map(|y| c * q + y).collect());
        }
        Pbd {
            v: q * q,
            blocks,
            lambda: 1,
        }
    }

    /// The affine plane of prime order `q` with each of its first `t`
    /// parallel classes extended by a new point at infinity (`q^2 + i` for
    /// class `i`), plus one block holding those points when `t >= 2`. Classes
    /// are ordered by slope `0..q`, then the vertical class.
    pub fn extended_affine_plane(q: usize, t: usize) -> Self {
        assert!(
            t <= q + 1,
            "an affine plane of order q has q + 1 parallel classes"
        );
        let mut plane = Pbd::affine_plane(q);
        for (i, block) in plane.blocks.iter_mut().enumerate() {
            let class = i / q;
            if class < t {
                block.push(q * q + class);
            }
        }
        if t >= 2 {
            plane.blocks.push((q * q..q * q + t).collect());
        }
        plane.v = q * q + t;
        plane
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

impl fmt::Display for Pbd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.v, self.lambda)?;
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Pbd {
    type Err = SpectrumError;

    /// `v lambda` on the first line, then one block per line.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_nums = |line: usize, l: &str| -> Result<Vec<usize>, SpectrumError> {
            l.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| SpectrumError::Parse {
                        line,
                        message: format!("not a non-negative integer: {t:?}"),
                    })
                })
                .collect()
        };
        let (line, header) = lines.next().ok_or(SpectrumError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let head = parse_nums(line, header)?;
        let [v, lambda] = head[..] else {
            return Err(SpectrumError::Parse {
                line,
                message: "header must be \"v lambda\"".into(),
            });
        };
        let blocks = lines
            .map(|(line, l)| parse_nums(line, l))
            .collect::<Result<Vec<_>, _>>()?;
        Pbd::new(v, blocks, lambda)
    }
}

/// `alpha = gcd{k(k-1)}` and `beta = gcd{k-1}` over a set of block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilsonParams {
    pub sizes: BTreeSet<u64>,
    pub alpha: u64,
    pub beta: u64,
}

impl WilsonParams {
    /// The necessary conditions `v(v-1) = 0 mod alpha` and
    /// `v - 1 = 0 mod beta` for a `lambda = 1` design with these block sizes.
    pub fn admissible(&self, v: u64) -> bool {
        v >= 1 && (v * (v - 1)).is_multiple_of(self.alpha) && (v - 1).is_multiple_of(self.beta)
    }
}

pub fn wilson_params(sizes: &[u64]) -> Result<WilsonParams, SpectrumError> {
    if sizes.is_empty() {
        return Err(SpectrumError::EmptySizeSet);
    }
    let sizes: BTreeSet<u64> = sizes.iter().copied().collect();
    let alpha = sizes.iter().fold(0, |g, &k| gcd(g, k * (k - 1)));
    let beta = sizes.iter().fold(0, |g, &k| gcd(g, k - 1));
    Ok(WilsonParams { sizes, alpha, beta })
}

/// `k = 2a + 3b` with the largest possible `b`.
pub fn two_power_decomposition(k: u32) -> Option<(u32, u32)> {
    if k < 2 {
        return None;
    }
    let b = if k.is_multiple_of(2) {
        (k / 6) * 2
    } else {
        ((k - 3) / 6) * 2 + 1
    };
    Some(((k - 3 * b) / 2, b))
}

pub const DEFAULT_MAX_TWO_POWER: u32 = 12;

/// An order-`2^k` T2-quasigroup built as a product of copies of the order-4
/// and order-8 fixtures, following [`two_power_decomposition`]. The order-4
/// factors come first.
pub fn two_power_construct(k: u32) -> Result<CayleyTable, SpectrumError> {
    two_power_construct_with_limit(k, DEFAULT_MAX_TWO_POWER)
}

pub fn two_power_construct_with_limit(k: u32, max_k: u32) -> Result<CayleyTable, SpectrumError> {
    let (a, b) = two_power_decomposition(k).ok_or(SpectrumError::Unrepresentable(k))?;
    if k > max_k {
        return Err(SpectrumError::Unrepresentable(k));
    }
    let limit = 1usize << max_k;
    let four = fixtures::BOXTIMES4.table();
    let eight = fixtures::DIAMOND8.table();
    let factors =
        std::iter::repeat_n(&four, a as usize).chain(std::iter::repeat_n(&eight, b as usize));
    let mut acc = CayleyTable::singleton();
    for f in factors {
        acc = acc.direct_product_with_limit(f, limit)?;
    }
    Ok(acc)
}

/// Builds an idempotent model on the design's points: `x * x = x`, and for
/// `x != y` the product is taken in the block containing both, through that
/// block's model. A block's points are identified with `0..size` in
/// ascending order.
pub fn pbd_compose(
    design: &Pbd,
    block_models: &BTreeMap<usize, CayleyTable>,
    targets: &[Identity],
) -> Result<CayleyTable, SpectrumError> {
    if design.lambda != 1 {
        return Err(SpectrumError::LambdaUnsupported(design.lambda));
    }
    for size in design.block_sizes() {
        let model = block_models
            .get(&size)
            .ok_or(SpectrumError::MissingBlockModel(size))?;
        if model.order() != size {
            return Err(SpectrumError::ModelOrderMismatch {
                size,
                order: model.order(),
            });
        }
        if !model.is_idempotent() {
            return Err(SpectrumError::NotIdempotent(size));
        }
        if let Some(id) = targets.iter().find(|id| !id.check(model).holds) {
            return Err(SpectrumError::ModelViolatesIdentity {
                size,
                identity: id.name.clone().unwrap_or_else(|| id.canonical()),
            });
        }
    }
    let v = design.v;
    let mut cells: Vec<u32> = (0..v * v)
        .map(|i| {
            if i / v == i % v {
                (i / v) as u32
            } else {
                u32::MAX
            }
        })
        .collect();
    for block in &design.blocks {
        let mut pts = block.clone();
        pts.sort_unstable();
        let model = &block_models[&pts.len()];
        for (i, &x) in pts.iter().enumerate() {
            for (j, &y) in pts.iter().enumerate() {
                if i != j {
                    cells[x * v + y] = pts[model.get(i, j)] as u32;
                }
            }
        }
    }
    Ok(CayleyTable::from_cells(v, cells)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Existence {
    Exists,
    NotExists,
    Unknown,
}

impl Existence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Existence::Exists => "EXISTS",
            Existence::NotExists => "NOT_EXISTS",
            Existence::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    Fixture,
    Modular,
    Product,
    Pbd,
    Search,
    Exhaustion,
}

impl Evidence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Evidence::Fixture => "FIXTURE",
            Evidence::Modular => "MODULAR",
            Evidence::Product => "PRODUCT",
            Evidence::Pbd => "PBD",
            Evidence::Search => "SEARCH",
            Evidence::Exhaustion => "EXHAUSTION",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub order: usize,
    pub status: Existence,
    pub evidence: Option<Evidence>,
    pub witness: Option<CayleyTable>,
    /// Search nodes spent on this order.
    pub nodes: u64,
    /// Short description of the witness or certificate.
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub idempotent: bool,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    pub fn entry(&self, order: usize) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.order == order)
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    pub idempotent: bool,
    /// Node budget for each per-order search.
    pub budget: u64,
    /// Extra designs to compose along when `idempotent` is set.
    pub designs: Vec<Pbd>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            idempotent: false,
            budget: crate::search::DEFAULT_NODE_BUDGET,
            designs: Vec::new(),
        }
    }
}

/// Status of T2-quasigroups (idempotent ones if requested) for every order
/// `1..=max_order`. Each order tries, in turn: the fixtures, residue-ring
/// forms, direct products of smaller witnesses, supplied designs (idempotent
/// only), then a budgeted search. EXISTS always comes with a witness that has
/// been re-verified; NOT_EXISTS only comes from an exhausted search.
pub fn spectrum_report(max_order: usize, opts: &SpectrumOptions) -> SpectrumReport {
    assert!(max_order >= 1, "max_order must be positive");
    let ids = vec![t2()];
    let mut entries: Vec<SpectrumEntry> = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        let spec = SearchSpec::new(n, ids.clone())
            .idempotent(opts.idempotent)
            .budget(opts.budget);
        let mut found = find_constructed(n, &spec, &entries, opts);
        if let Some((_, ref t, _)) = found {
            if !verify_witness(t, &spec) {
                found = None;
            }
        }
        let entry = match found {
            Some((evidence, witness, detail)) => SpectrumEntry {
                order: n,
                status: Existence::Exists,
                evidence: Some(evidence),
                witness: Some(witness),
                nodes: 0,
                detail,
            },
            None if n <= MAX_SEARCH_ORDER => {
                let out = search(&spec).expect("order within search limits");
                match out.status {
                    SearchStatus::Found => SpectrumEntry {
                        order: n,
                        status: Existence::Exists,
                        evidence: Some(Evidence::Search),
                        witness: out.witnesses.into_iter().next(),
                        nodes: out.nodes_explored,
                        detail: "search".into(),
                    },
                    SearchStatus::ExhaustedNone => SpectrumEntry {
                        order: n,
                        status: Existence::NotExists,
                        evidence: Some(Evidence::Exhaustion),
                        witness: None,
                        nodes: out.nodes_explored,
                        detail: format!("exhausted after {} nodes", out.nodes_explored),
                    },
                    SearchStatus::BudgetExceeded => SpectrumEntry {
                        order: n,
                        status: Existence::Unknown,
                        evidence: None,
                        witness: None,
                        nodes: out.nodes_explored,
                        detail: format!("budget of {} nodes exceeded", opts.budget),
                    },
                }
            }
            None => SpectrumEntry {
                order: n,
                status: Existence::Unknown,
                evidence: None,
                witness: None,
                nodes: 0,
                detail: "beyond search range".into(),
            },
        };
        entries.push(entry);
    }
    SpectrumReport {
        idempotent: opts.idempotent,
        entries,
    }
}

fn find_constructed(
    n: usize,
    spec: &SearchSpec,
    known: &[SpectrumEntry],
    opts: &SpectrumOptions,
) -> Option<(Evidence, CayleyTable, String)> {
    let acceptable = |t: &CayleyTable| !opts.idempotent || t.is_idempotent();

    for f in fixtures::ALL {
        let t = f.table();
        if t.order() == n && acceptable(&t) {
            return Some((Evidence::Fixture, t, f.name.to_string()));
        }
    }

    for form in all_t2_forms(n as u64) {
        let Ok(t) = form.materialize() else { continue };
        if acceptable(&t) {
            let detail = format!(
                "x*y = {}x + {}y + {} mod {}",
                form.a(),
                form.c(),
                form.b(),
                form.modulus()
            );
            return Some((Evidence::Modular, t, detail));
        }
    }

    let witness = |m: usize| known.get(m - 1).and_then(|e| e.witness.as_ref());
    for d in 2..n {
        if d * d > n {
            break;
        }
        if !n.is_multiple_of(d) {
            continue;
        }
        if let (Some(a), Some(b)) = (witness(d), witness(n / d)) {
            if let Ok(t) = a.direct_product(b) {
                return Some((Evidence::Product, t, format!("{d} x {}", n / d)));
            }
        }
    }

    if opts.idempotent {
        for design in opts
            .designs
            .iter()
            .filter(|d| d.v() == n && d.lambda() == 1)
        {
            let models: Option<BTreeMap<usize, CayleyTable>> = design
                .block_sizes()
                .into_iter()
                .filter(|&s| s < n)
                .map(|s| witness(s).map(|t| (s, t.clone())))
                .collect();
            let Some(models) = models else { continue };
            if let Ok(t) = pbd_compose(design, &models, &spec.identities) {
                let sizes: Vec<String> = models.keys().map(usize::to_string).collect();
                return Some((
                    Evidence::Pbd,
                    t,
                    format!("design with block sizes {{{}}}", sizes.join(",")),
                ));
            }
        }
    }
    None
}
