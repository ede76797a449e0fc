//! Cayley tables of finite quasigroups on `{0..n-1}`.
//!
//! A [`CayleyTable`] is only ever constructed through validation, so every
//! value of the type is a Latin square: each row and each column is a
//! permutation of the element set.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest order accepted by constructors that multiply orders together.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("row {row} repeats value {value} (second occurrence in column {col})")]
    RowViolation {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("column {col} repeats value {value} (second occurrence in row {row})")]
    ColumnViolation {
        col: usize,
        row: usize,
        value: usize,
    },
    #[error("orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("malformed table text at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl TableError {
    /// Short variant name, used by the command line front end.
    pub fn name(&self) -> &'static str {
        match self {
            TableError::Empty => "Empty",
            TableError::NotSquare { .. } => "NotSquare",
            TableError::EntryOutOfRange { .. } => "EntryOutOfRange",
            TableError::RowViolation { .. } => "RowViolation",
            TableError::ColumnViolation { .. } => "ColumnViolation",
            TableError::OrderMismatch { .. } => "OrderMismatch",
            TableError::OrderTooLarge { .. } => "OrderTooLarge",
            TableError::Parse { .. } => "ParseError",
        }
    }
}

/// A finite quasigroup given by its multiplication table.
///
/// Cells are stored row-major: the product `x * y` lives at index `x * n + y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    order: usize,
    cells: Vec<u32>,
}

/// One of the three translation families of a quasigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Translation {
    /// `L_a(x) = a * x`
    Left,
    /// `R_a(x) = x * a`
    Right,
    /// `P_a(x) = x \ a`, the unique `z` with `x * z = a`.
    Middle,
}

impl CayleyTable {
    /// Validates a grid given as rows. Rows are scanned top to bottom and the
    /// first repeated value in a row or column is reported.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self, TableError> {
        let order = rows.len();
        if order == 0 {
            return Err(TableError::Empty);
        }
        let mut cells = Vec::with_capacity(order * order);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != order {
                return Err(TableError::NotSquare {
                    row,
                    len: r.len(),
                    order,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(TableError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order,
                    });
                }
                cells.push(value as u32);
            }
        }
        Self::from_cells(order, cells)
    }

    /// Validates a flat row-major cell vector of length `order * order`.
    pub fn from_cells(order: usize, cells: Vec<u32>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        if cells.len() != order * order {
            return Err(TableError::NotSquare {
                row: cells.len() / order,
                len: cells.len() % order,
                order,
            });
        }
        // One bitset per row and per column, so the first duplicate met in
        // row-major order is reported, whichever kind it is.
        let words = order.div_ceil(64);
        let mut row_seen = vec![0u64; words];
        let mut col_seen = vec![0u64; order * words];
        for row in 0..order {
            row_seen.iter_mut().for_each(|w| *w = 0);
            for col in 0..order {
                let value = cells[row * order + col] as usize;
                if value >= order {
                    return Err(TableError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order,
                    });
                }
                let (w, bit) = (value / 64, 1u64 << (value % 64));
                if row_seen[w] & bit != 0 {
                    return Err(TableError::RowViolation { row, col, value });
                }
                row_seen[w] |= bit;
                let cw = &mut col_seen[col * words + w];
                if *cw & bit != 0 {
                    return Err(TableError::ColumnViolation { col, row, value });
                }
                *cw |= bit;
            }
        }
        Ok(CayleyTable { order, cells })
    }

    /// Builds a table from an operation closure, validating the result.
    pub fn from_fn(order: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        let mut cells = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let v = op(x, y);
                if v >= order {
                    return Err(TableError::EntryOutOfRange {
                        row: x,
                        col: y,
                        value: v,
                        order,
                    });
                }
                cells.push(v as u32);
            }
        }
        Self::from_cells(order, cells)
    }

    /// The one-element quasigroup.
    pub fn singleton() -> Self {
        CayleyTable {
            order: 1,
            cells: vec![0],
        }
    }

    /// The cyclic group `x + y mod n`.
    pub fn cyclic(order: usize) -> Self {
        assert!(order > 0);
        let cells = (0..order)
            .flat_map(|x| (0..order).map(move |y| ((x + y) % order) as u32))
            .collect();
        CayleyTable { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.order + y] as usize
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.cells[x * self.order..(x + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| self.row(x).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// `x \ a`: the unique `z` with `x * z = a`.
    pub fn left_div(&self, x: usize, a: usize) -> usize {
        self.row(x)
            .iter()
            .position(|&v| v as usize == a)
            .expect("rows of a Latin square are permutations")
    }

    /// `a / y`: the unique `z` with `z * y = a`.
    pub fn right_div(&self, a: usize, y: usize) -> usize {
        (0..self.order)
            .find(|&z| self.get(z, y) == a)
            .expect("columns of a Latin square are permutations")
    }

    /// The translation of the given kind at `a`, as an image vector.
    pub fn translation(&self, kind: Translation, a: usize) -> Vec<usize> {
        assert!(a < self.order, "element {a} out of range");
        let n = self.order;
        match kind {
            Translation::Left => (0..n).map(|x| self.get(a, x)).collect(),
            Translation::Right => (0..n).map(|x| self.get(x, a)).collect(),
            // x * z = a  <=>  P_a(x) = z
            Translation::Middle => (0..n).map(|x| self.left_div(x, a)).collect(),
        }
    }

    /// Checks `L_y ∘ L_y = P_y` for every `y`, which is the identity
    /// `x * (y * (y * x)) = y` read through translations.
    pub fn satisfies_t2_via_translations(&self) -> bool {
        (0..self.order).all(|y| {
            let l = self.translation(Translation::Left, y);
            let p = self.translation(Translation::Middle, y);
            (0..self.order).all(|x| l[l[x]] == p[x])
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|x| self.get(x, x) == x)
    }

    /// Conjugate operation selected by `s`. See [`Parastrophe`].
    pub fn parastrophe(&self, s: Parastrophe) -> CayleyTable {
        let n = self.order;
        let mut cells = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let src = [x, y, self.get(x, y)];
                let mut dst = [0usize; 3];
                for (role, &v) in src.iter().enumerate() {
                    dst[s.0[role] as usize] = v;
                }
                cells[dst[0] * n + dst[1]] = dst[2] as u32;
            }
        }
        CayleyTable { order: n, cells }
    }

    /// Two operations on the same set are orthogonal when
    /// `(x, y) -> (self(x, y), other(x, y))` is a bijection.
    pub fn is_orthogonal_to(&self, other: &CayleyTable) -> Result<bool, TableError> {
        if self.order != other.order {
            return Err(TableError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        let n = self.order;
        let mut seen = vec![false; n * n];
        for (&a, &b) in self.cells.iter().zip(&other.cells) {
            let k = a as usize * n + b as usize;
            if seen[k] {
                return Ok(false);
            }
            seen[k] = true;
        }
        Ok(true)
    }

    /// Direct product with [`DEFAULT_MAX_ORDER`] as the size limit.
    pub fn direct_product(&self, other: &CayleyTable) -> Result<CayleyTable, TableError> {
        self.direct_product_with_limit(other, DEFAULT_MAX_ORDER)
    }

    /// Componentwise product on pairs, where the pair `(i, j)` is encoded as
    /// `i * other.order() + j`.
    pub fn direct_product_with_limit(
        &self,
        other: &CayleyTable,
        max_order: usize,
    ) -> Result<CayleyTable, TableError> {
        let (m, n) = (self.order, other.order);
        let order =
            m.checked_mul(n)
                .filter(|&o| o <= max_order)
                .ok_or(TableError::OrderTooLarge {
                    order: m.saturating_mul(n),
                    max: max_order,
                })?;
        let mut cells = Vec::with_capacity(order * order);
        for i1 in 0..m {
            for j1 in 0..n {
                for i2 in 0..m {
                    let a = self.get(i1, i2) * n;
                    let row2 = other.row(j1);
                    cells.extend(row2.iter().map(|&b| (a + b as usize) as u32));
                }
            }
        }
        Ok(CayleyTable { order, cells })
    }

    /// Serializes to the text format: the order on the first line, then one
    /// line per row with single spaces between entries.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for x in 0..self.order {
            let mut first = true;
            for &v in self.row(x) {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyTable(")?;
        for x in 0..self.order {
            if x > 0 {
                f.write_str(" / ")?;
            }
            for (i, v) in self.row(x).iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, ")")
    }
}

impl FromStr for CayleyTable {
    type Err = TableError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(TableError::Empty)?;
        let order: usize = header.parse().map_err(|_| TableError::Parse {
            line,
            message: format!("expected the order, found {header:?}"),
        })?;
        let mut rows = Vec::with_capacity(order);
        for (line, l) in lines {
            if rows.len() == order {
                return Err(TableError::Parse {
                    line,
                    message: format!("more than {order} rows"),
                });
            }
            let row = l
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| TableError::Parse {
                        line,
                        message: format!("not a non-negative integer: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != order {
            return Err(TableError::Parse {
                line: text.lines().count(),
                message: format!("expected {order} rows, found {}", rows.len()),
            });
        }
        CayleyTable::from_rows(&rows)
    }
}

/// A permutation of the three roles `(x, y, x*y)` of a quasigroup triple.
///
/// The selector moves the value in role `i` to role `self.0[i]`, so the
/// conjugate graph is `{ w : w[s(i)] = v[i], v in graph }`. Applying `s` and
/// then `t` equals applying `t.after(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Parastrophe([u8; 3]);

impl Parastrophe {
    pub const IDENTITY: Parastrophe = Parastrophe([0, 1, 2]);
    /// Swaps the two arguments: `x ∘ y = y * x`.
    pub const SWAP_12: Parastrophe = Parastrophe([1, 0, 2]);
    /// Swaps second argument and result: `x ∘ y = x \ y` (left division).
    pub const SWAP_23: Parastrophe = Parastrophe([0, 2, 1]);
    /// Swaps first argument and result: `x ∘ y = x / y` (right division).
    pub const SWAP_13: Parastrophe = Parastrophe([2, 1, 0]);
    pub const CYCLE_123: Parastrophe = Parastrophe([1, 2, 0]);
    pub const CYCLE_132: Parastrophe = Parastrophe([2, 0, 1]);

    pub const ALL: [Parastrophe; 6] = [
        Self::IDENTITY,
        Self::SWAP_12,
        Self::SWAP_23,
        Self::SWAP_13,
        Self::CYCLE_123,
        Self::CYCLE_132,
    ];

    /// Returns `None` unless `images` is a permutation of `0..3`.
    pub fn new(images: [u8; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Parastrophe(images))
    }

    pub fn images(&self) -> [u8; 3] {
        self.0
    }

    /// The composite `self ∘ first`: apply `first`, then `self`.
    pub fn after(self, first: Parastrophe) -> Parastrophe {
        Parastrophe([
            self.0[first.0[0] as usize],
            self.0[first.0[1] as usize],
            self.0[first.0[2] as usize],
        ])
    }

    pub fn inverse(self) -> Parastrophe {
        let mut inv = [0u8; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Parastrophe(inv)
    }
}
