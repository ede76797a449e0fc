//! T-quasigroups `x * y = a*x + c*y + b` over the residue ring `Z_n`.
//!
//! Such a quasigroup satisfies `x*(y*(y*x)) = y` exactly when
//!
//! * `a = -c^3`,
//! * `c^5 + c^4 + 1 = 0`, and
//! * `c^2 b + c b + b = 0`,
//!
//! all in `Z_n`. Every root `k` of `f(k) = k^5 + k^4 + 1` modulo `r` that is
//! a unit therefore yields `x * y = -k^3 x + k y + b` for each `b` solving
//! the last congruence. The negation map `x -> -x` is multiplication by
//! `n - 1`. A T2 quasigroup isotopic to an abelian group always takes such a
//! form up to isomorphism, but that direction is not constructive and is not
//! implemented here.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::{gcd, mod_mul, mod_pow, rem_euclid_u64, solve_linear_congruence};
use crate::table::CayleyTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("integer overflow evaluating f({0})")]
    Overflow(i64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{k} is not a root of k^5 + k^4 + 1 modulo {modulus}")]
    NotARoot { modulus: u64, k: i64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { modulus: u64, value: u64 },
    #[error("b = {b} does not satisfy (k^2 + k + 1) b = 0 modulo {modulus}")]
    BadConstant { modulus: u64, b: i64 },
    #[error("modulus {0} is too large to materialize")]
    TooLarge(u64),
}

impl ModularError {
    pub fn name(&self) -> &'static str {
        match self {
            ModularError::Overflow(_) => "Overflow",
            ModularError::ZeroModulus => "ZeroModulus",
            ModularError::NotARoot { .. } => "NotARoot",
            ModularError::NotInvertible { .. } => "NotInvertible",
            ModularError::BadConstant { .. } => "BadConstant",
            ModularError::TooLarge(_) => "OrderTooLarge",
        }
    }
}

/// `f(k) = k^5 + k^4 + 1`, exactly, or `Overflow` if it leaves `i64`.
pub fn f_value(k: i64) -> Result<i64, ModularError> {
    let k4 = k.checked_pow(4).ok_or(ModularError::Overflow(k))?;
    let k5 = k4.checked_mul(k).ok_or(ModularError::Overflow(k))?;
    k5.checked_add(k4)
        .and_then(|v| v.checked_add(1))
        .ok_or(ModularError::Overflow(k))
}

fn f_mod(k: u64, r: u64) -> u64 {
    let k4 = mod_pow(k, 4, r);
    let k5 = mod_mul(k4, k, r);
    (((k5 as u128 + k4 as u128 + 1) % r as u128) as u64) % r
}

/// All `k` in `0..r` with `f(k) = 0 (mod r)`, ascending.
pub fn scan_roots(r: u64) -> Vec<u64> {
    assert!(r >= 1, "modulus must be positive");
    (0..r).filter(|&k| f_mod(k, r) == 0).collect()
}

/// All `b` in `0..r` with `(k^2 + k + 1) b = 0 (mod r)`, ascending. There
/// are exactly `gcd(k^2 + k + 1, r)` of them, zero included.
pub fn b_solutions(r: u64, k: i64) -> Vec<u64> {
    assert!(r >= 1, "modulus must be positive");
    let k = rem_euclid_u64(k, r);
    let coeff = (mod_mul(k, k, r) + k + 1) % r;
    solve_linear_congruence(coeff, 0, r).expect("homogeneous congruence is always solvable")
}

/// `x * y = a x + c y + b` over `Z_modulus`, with `a` and `c` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TForm {
    modulus: u64,
    a: u64,
    c: u64,
    b: u64,
}

impl TForm {
    /// Reduces the coefficients mod `modulus` and checks that `a` and `c`
    /// are invertible.
    pub fn new(modulus: u64, a: i64, c: i64, b: i64) -> Result<Self, ModularError> {
        if modulus == 0 {
            return Err(ModularError::ZeroModulus);
        }
        let (a, c, b) = (
            rem_euclid_u64(a, modulus),
            rem_euclid_u64(c, modulus),
            rem_euclid_u64(b, modulus),
        );
        for value in [a, c] {
            if gcd(value, modulus) != 1 {
                return Err(ModularError::NotInvertible { modulus, value });
            }
        }
        Ok(TForm { modulus, a, c, b })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Multiplier of the left argument.
    pub fn a(&self) -> u64 {
        self.a
    }

    /// Multiplier of the right argument.
    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn apply(&self, x: u64, y: u64) -> u64 {
        let n = self.modulus;
        (mod_mul(self.a, x, n) + mod_mul(self.c, y, n) + self.b) % n
    }

    pub fn check_conditions(&self) -> ConditionReport {
        let n = self.modulus;
        let c = self.c;
        let c3 = mod_pow(c, 3, n);
        let neg_c3 = (n - c3) % n;
        let c4 = mod_mul(c3, c, n);
        let c5 = mod_mul(c4, c, n);
        let c2 = mod_mul(c, c, n);
        let sum_b = (mod_mul(c2, self.b, n) + mod_mul(c, self.b, n) + self.b) % n;
        ConditionReport {
            phi_ok: self.a == neg_c3,
            psi_ok: (c5 + c4 + 1).is_multiple_of(n),
            b_ok: sum_b == 0,
        }
    }

    /// The Cayley table `grid[x][y] = (a x + c y + b) mod n`.
    pub fn materialize(&self) -> Result<CayleyTable, ModularError> {
        let n = usize::try_from(self.modulus)
            .ok()
            .filter(|&n| n <= crate::table::DEFAULT_MAX_ORDER)
            .ok_or(ModularError::TooLarge(self.modulus))?;
        Ok(
            CayleyTable::from_fn(n, |x, y| self.apply(x as u64, y as u64) as usize)
                .expect("unit multipliers give a Latin square"),
        )
    }
}

/// Which of the three T2 conditions a form meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionReport {
    /// `a = -c^3`
    pub phi_ok: bool,
    /// `c^5 + c^4 + 1 = 0`
    pub psi_ok: bool,
    /// `c^2 b + c b + b = 0`
    pub b_ok: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.phi_ok && self.psi_ok && self.b_ok
    }
}

pub fn check_t_conditions(form: &TForm) -> ConditionReport {
    form.check_conditions()
}

pub fn materialize(form: &TForm) -> Result<CayleyTable, ModularError> {
    form.materialize()
}

/// `x * y = -k^3 x + k y + b` over `Z_r`. `k` and `b` may be given as any
/// integers; they are reduced mod `r` first.
pub fn build_t_form(r: u64, k: i64, b: i64) -> Result<TForm, ModularError> {
    if r == 0 {
        return Err(ModularError::ZeroModulus);
    }
    let kr = rem_euclid_u64(k, r);
    if f_mod(kr, r) != 0 {
        return Err(ModularError::NotARoot { modulus: r, k });
    }
    if gcd(kr, r) != 1 {
        return Err(ModularError::NotInvertible {
            modulus: r,
            value: kr,
        });
    }
    let br = rem_euclid_u64(b, r);
    if b_solutions(r, k).binary_search(&br).is_err() {
        return Err(ModularError::BadConstant { modulus: r, b });
    }
    let a = (r - mod_pow(kr, 3, r)) % r;
    Ok(TForm {
        modulus: r,
        a,
        c: kr,
        b: br,
    })
}

/// Every T2 form over `Z_r` produced by a unit root and an admissible `b`,
/// ordered by `(k, b)`.
pub fn all_t2_forms(r: u64) -> Vec<TForm> {
    scan_roots(r)
        .into_iter()
        .filter(|&k| gcd(k, r) == 1)
        .flat_map(|k| {
            b_solutions(r, k as i64)
                .into_iter()
                .map(move |b| build_t_form(r, k as i64, b as i64).expect("scanned root"))
        })
        .collect()
}

/// Prime factors of `m` with multiplicity, ascending, by trial division.
pub fn factorize(mut m: u64) -> Vec<u64> {
    assert!(m >= 1, "factorize expects a positive integer");
    let mut out = Vec::new();
    while m.is_multiple_of(2) {
        out.push(2);
        m /= 2;
    }
    let mut d = 3u64;
    while d <= m / d {
        while m.is_multiple_of(d) {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRow {
    pub k: i64,
    pub value: i64,
    /// Prime factors of `|value|` with multiplicity.
    pub factors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyScan {
    pub rows: Vec<PolyRow>,
    /// Distinct primes dividing some `f(k)`.
    pub primes: BTreeSet<u64>,
}

/// Evaluates and factors `f(k)` for every `k` in `k_from..=k_to`.
pub fn scan_polynomial(k_from: i64, k_to: i64) -> Result<PolyScan, ModularError> {
    assert!(k_from <= k_to, "empty scan range");
    let mut rows = Vec::new();
    let mut primes = BTreeSet::new();
    for k in k_from..=k_to {
        let value = f_value(k)?;
        let factors = if value == 0 {
            Vec::new()
        } else {
            factorize(value.unsigned_abs())
        };
        primes.extend(factors.iter().copied());
        rows.push(PolyRow { k, value, factors });
    }
    Ok(PolyScan { rows, primes })
}

/// A printed list of `f` values and claimed prime divisors, compared against
/// recomputation.
#[derive(Debug, Clone, Copy)]
pub struct Listing {
    /// Keys the list is meant to cover.
    pub domain: &'static [i64],
    /// `(k, f(k))` in the order printed.
    pub values: &'static [(i64, i64)],
    pub primes: &'static [u64],
}

/// The widely reproduced list of `f(k)` for `k = -20..=20` (excluding 0),
/// verbatim, including its repeated `k = 12` row in the slot for 16.
pub const PUBLISHED_LISTING: Listing = Listing {
    domain: &[
        -20, -19, -18, -17, -16, -15, -14, -13, -12, -11, -10, -9, -8, -7, -6, -5, -4, -3, -2, -1,
        1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
    ],
    values: &[
        (-20, -3039999),
        (-19, -2345777),
        (-18, -1784591),
        (-17, -1336335),
        (-16, -983039),
        (-15, -708749),
        (-14, -499407),
        (-13, -342731),
        (-12, -228095),
        (-11, -146409),
        (-10, -89999),
        (-9, -52487),
        (-8, -28671),
        (-7, -14405),
        (-6, -6479),
        (-5, -2499),
        (-4, -767),
        (-3, -161),
        (-2, -15),
        (-1, 1),
        (1, 3),
        (2, 49),
        (3, 325),
        (4, 1281),
        (5, 3751),
        (6, 9073),
        (7, 19209),
        (8, 36865),
        (9, 65611),
        (10, 110001),
        (11, 175693),
        (12, 269569),
        (13, 399855),
        (14, 576241),
        (15, 810001),
        (12, 269569),
        (17, 1503379),
        (18, 1994545),
        (19, 2606421),
        (20, 3360001),
    ],
    primes: &[
        3, 5, 7, 13, 19, 23, 37, 43, 59, 61, 73, 101, 157, 211, 241, 307, 341, 347, 421, 503, 719,
        833, 977, 979, 1163, 1319, 2183, 2881, 3359, 3751, 5047, 5813, 6403, 7373, 9073, 10033,
        25099, 36667, 166469, 269569, 868807, 1503379,
    ],
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ListingDiscrepancies {
    /// `(k, printed, recomputed)` for printed values that are wrong.
    pub value_mismatches: Vec<(i64, i64, i64)>,
    /// Keys printed more than once.
    pub duplicate_keys: Vec<i64>,
    /// Domain keys in the scan with no printed value.
    pub missing_keys: Vec<i64>,
    /// Printed "primes" that are composite, with their factorization.
    pub composite_entries: Vec<(u64, Vec<u64>)>,
    /// Printed primes that divide none of the scanned values.
    pub spurious_primes: Vec<u64>,
    /// Primes dividing a scanned domain value but absent from the printed set.
    pub unlisted_primes: Vec<u64>,
}

impl ListingDiscrepancies {
    pub fn is_empty(&self) -> bool {
        *self == ListingDiscrepancies::default()
    }
}

/// Compares a listing against a scan. Only keys inside both the scan range
/// and the listing's domain take part.
pub fn compare_with_listing(scan: &PolyScan, listing: &Listing) -> ListingDiscrepancies {
    let scanned: std::collections::BTreeMap<i64, &PolyRow> =
        scan.rows.iter().map(|r| (r.k, r)).collect();
    let in_scope = |k: i64| scanned.contains_key(&k) && listing.domain.contains(&k);
    let mut out = ListingDiscrepancies::default();

    let mut seen = BTreeSet::new();
    for &(k, printed) in listing.values {
        if !in_scope(k) {
            continue;
        }
        if !seen.insert(k) && !out.duplicate_keys.contains(&k) {
            out.duplicate_keys.push(k);
        }
        let actual = scanned[&k].value;
        if actual != printed {
            out.value_mismatches.push((k, printed, actual));
        }
    }
    out.missing_keys = listing
        .domain
        .iter()
        .copied()
        .filter(|&k| in_scope(k) && !seen.contains(&k))
        .collect();

    let domain_primes: BTreeSet<u64> = scan
        .rows
        .iter()
        .filter(|r| listing.domain.contains(&r.k))
        .flat_map(|r| r.factors.iter().copied())
        .collect();
    let printed: BTreeSet<u64> = listing.primes.iter().copied().collect();
    for &p in &printed {
        if !crate::arith::is_prime(p) {
            out.composite_entries.push((p, factorize(p)));
        } else if !domain_primes.contains(&p) {
            out.spurious_primes.push(p);
        }
    }
    out.unlisted_primes = domain_primes.difference(&printed).copied().collect();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::t2;

    #[test]
    fn f_values() {
        assert_eq!(f_value(-3), Ok(-161));
        assert_eq!(f_value(0), Ok(1));
        assert_eq!(f_value(7), Ok(19209));
        assert_eq!(f_value(1 << 12), Ok((1i64 << 60) + (1 << 48) + 1));
        assert_eq!(f_value(1 << 13), Err(ModularError::Overflow(1 << 13)));
        assert_eq!(f_value(i64::MIN), Err(ModularError::Overflow(i64::MIN)));
    }

    #[test]
    fn roots() {
        assert_eq!(scan_roots(7), vec![2, 4]);
        assert!(scan_roots(23).contains(&20));
        assert!(scan_roots(161).contains(&158));
        assert_eq!(scan_roots(1), vec![0]);
    }

    #[test]
    fn roots_match_direct_evaluation() {
        for r in 1..60u64 {
            let brute: Vec<u64> = (0..r as i64)
                .filter(|&k| f_value(k).unwrap().rem_euclid(r as i64) == 0)
                .map(|k| k as u64)
                .collect();
            assert_eq!(scan_roots(r), brute, "r = {r}");
        }
    }

    #[test]
    fn constants() {
        assert_eq!(b_solutions(7, 4), (0..7).collect::<Vec<_>>());
        assert_eq!(b_solutions(23, 20), vec![0]);
        assert_eq!(b_solutions(161, 158), vec![0, 23, 46, 69, 92, 115, 138]);
        assert_eq!(b_solutions(161, -3), b_solutions(161, 158));
    }

    #[test]
    fn build_forms() {
        let f = build_t_form(7, -3, 0).unwrap();
        assert_eq!((f.modulus(), f.a(), f.c(), f.b()), (7, 6, 4, 0));
        let f = build_t_form(23, -3, 0).unwrap();
        assert_eq!((f.a(), f.c(), f.b()), (4, 20, 0));
        let f = build_t_form(161, -3, 23).unwrap();
        assert_eq!((f.a(), f.c(), f.b()), (27, 158, 23));
        let f = build_t_form(1, 0, 0).unwrap();
        assert_eq!((f.modulus(), f.a(), f.c(), f.b()), (1, 0, 0, 0));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_t_form(7, 1, 0),
            Err(ModularError::NotARoot { modulus: 7, k: 1 })
        );
        assert_eq!(
            build_t_form(23, -3, 5),
            Err(ModularError::BadConstant { modulus: 23, b: 5 })
        );
    }

    #[test]
    fn roots_are_always_units() {
        // f(k) = k^4 (k + 1) + 1 is 1 modulo every prime dividing k.
        for r in 2..2000u64 {
            for k in scan_roots(r) {
                assert_eq!(gcd(k, r), 1, "root {k} mod {r}");
            }
        }
    }

    #[test]
    fn condition_reports() {
        let r = TForm::new(7, 6, 4, 3).unwrap().check_conditions();
        assert!(r.all());
        let r = TForm::new(7, 1, 1, 0).unwrap().check_conditions();
        assert!(!r.psi_ok);
        let r = TForm::new(3, 2, 1, 0).unwrap().check_conditions();
        assert!(r.all());
        assert_eq!(
            TForm::new(6, 2, 1, 0),
            Err(ModularError::NotInvertible {
                modulus: 6,
                value: 2
            })
        );
    }

    #[test]
    fn materialize_small_forms() {
        let star = TForm::new(3, 2, 1, 0).unwrap().materialize().unwrap();
        assert_eq!(star, crate::fixtures::STAR3.table());
        let t7 = TForm::new(7, 6, 4, 0).unwrap().materialize().unwrap();
        assert!(t7.satisfies_t2_via_translations());
        assert_eq!(
            TForm::new(1, 0, 0, 0).unwrap().materialize().unwrap(),
            CayleyTable::singleton()
        );
    }

    #[test]
    fn every_scanned_form_is_t2() {
        for r in [3u64, 7, 23, 161] {
            let forms = all_t2_forms(r);
            assert!(!forms.is_empty());
            for f in forms {
                let t = f.materialize().unwrap();
                assert!(t2().check(&t).holds, "{f:?}");
            }
        }
    }

    #[test]
    fn t2_forms_are_medial() {
        for n in 1..=7u64 {
            for f in all_t2_forms(n) {
                let t = f.materialize().unwrap();
                let n = n as usize;
                for x in 0..n {
                    for y in 0..n {
                        for u in 0..n {
                            for v in 0..n {
                                assert_eq!(
                                    t.get(t.get(x, y), t.get(u, v)),
                                    t.get(t.get(x, u), t.get(y, v))
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(161), vec![7, 23]);
        assert_eq!(factorize(1), Vec::<u64>::new());
        assert_eq!(factorize(3039999), vec![3, 79, 101, 127]);
    }

    #[test]
    fn scan_single_points() {
        let s = scan_polynomial(-3, -3).unwrap();
        assert_eq!(
            s.rows[0],
            PolyRow {
                k: -3,
                value: -161,
                factors: vec![7, 23]
            }
        );
        let s = scan_polynomial(-1, -1).unwrap();
        assert_eq!(
            s.rows[0],
            PolyRow {
                k: -1,
                value: 1,
                factors: vec![]
            }
        );
        assert!(s.primes.is_empty());
    }
}
