//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasigroup_t2::arith::gcd;
use quasigroup_t2::fixtures;
use quasigroup_t2::modular::{
    b_solutions, build_t_form, compare_with_listing, scan_polynomial, scan_roots, TForm,
    PUBLISHED_LISTING,
};
use quasigroup_t2::search::{search, SearchMode, SearchSpec, SearchStatus};
use quasigroup_t2::spectrum::{pbd_compose, two_power_construct, wilson_params, Pbd};
use quasigroup_t2::{t2, CayleyTable, Parastrophe};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

/// Direct evaluation of x*(y*(y*x)) = y, independent of the identity DSL.
fn t2_direct(t: &CayleyTable, x: usize, y: usize) -> bool {
    t.get(x, t.get(y, t.get(y, x))) == y
}

fn t2_exhaustive(t: &CayleyTable) -> bool {
    let n = t.order();
    (0..n).all(|x| (0..n).all(|y| t2_direct(t, x, y)))
}

fn fixture_verification() -> Outcome {
    let start = Instant::now();
    for f in fixtures::ALL {
        let t: CayleyTable = f
            .text
            .parse()
            .map_err(|e| format!("{} does not validate: {e}", f.name))?;
        ensure!(t2().check(&t).holds, "{} fails the identity check", f.name);
        ensure!(
            t.satisfies_t2_via_translations(),
            "{} fails the translation criterion",
            f.name
        );
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("9 tables in {:.2?}", start.elapsed()))
}

fn idempotency_classification() -> Outcome {
    let expected = [
        ("circ5", true),
        ("star7", true),
        ("diamond8", true),
        ("bullet11", true),
        ("boxminus11", true),
        ("star3", false),
        ("boxtimes4", false),
        ("boxdot7", false),
        ("boxplus9", false),
    ];
    for (name, idem) in expected {
        let t = fixtures::by_name(name).unwrap().table();
        let diagonal = (0..t.order()).all(|i| t.get(i, i) == i);
        ensure!(diagonal == idem, "{name}: diagonal idempotent = {diagonal}");
        ensure!(t.is_idempotent() == idem, "{name}: is_idempotent disagrees");
    }
    Ok("5 idempotent, 4 not".into())
}

fn modular_examples() -> Outcome {
    let start = Instant::now();
    let cases: [(u64, i64, (u64, u64), usize); 3] = [
        (7, 4, (6, 4), 7),
        (23, 20, (4, 20), 1),
        (161, 158, (27, 158), 7),
    ];
    for (r, k, (a, c), nsol) in cases {
        ensure!(
            scan_roots(r).contains(&(k as u64)),
            "{k} not a root mod {r}"
        );
        let form = build_t_form(r, k, 0).map_err(|e| e.to_string())?;
        ensure!(
            (form.a(), form.c()) == (a, c),
            "mod {r}: got ({}, {})",
            form.a(),
            form.c()
        );
        let sols = b_solutions(r, k);
        ensure!(sols.len() == nsol, "mod {r}: {} b-solutions", sols.len());
        for b in sols {
            let t = build_t_form(r, k, b as i64)
                .and_then(|f| f.materialize())
                .map_err(|e| e.to_string())?;
            ensure!(t2_exhaustive(&t), "mod {r}, b = {b} fails the identity");
        }
    }
    let nonzero: Vec<u64> = b_solutions(161, 158)
        .into_iter()
        .filter(|&b| b != 0)
        .collect();
    ensure!(
        nonzero == [23, 46, 69, 92, 115, 138],
        "non-zero mod-161 solutions {nonzero:?}"
    );
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("moduli 7, 23, 161 in {:.2?}", start.elapsed()))
}

fn polynomial_scan() -> Outcome {
    let scan = scan_polynomial(-20, 20).map_err(|e| e.to_string())?;
    for row in &scan.rows {
        let k = row.k as i128;
        ensure!(
            row.value as i128 == k.pow(5) + k.pow(4) + 1,
            "f({}) = {}",
            row.k,
            row.value
        );
    }
    let d = compare_with_listing(&scan, &PUBLISHED_LISTING);
    ensure!(
        d.value_mismatches.is_empty(),
        "printed values disagree: {:?}",
        d.value_mismatches
    );
    ensure!(
        d.duplicate_keys == [12],
        "duplicate keys {:?}",
        d.duplicate_keys
    );
    ensure!(d.missing_keys == [16], "missing keys {:?}", d.missing_keys);
    ensure!(
        !d.composite_entries.is_empty(),
        "no composite entries flagged"
    );
    for (p, factors) in &d.composite_entries {
        ensure!(
            factors.len() > 1 && factors.iter().product::<u64>() == *p,
            "bad factorization of {p}"
        );
    }
    ensure!(
        d.spurious_primes.is_empty(),
        "spurious {:?}",
        d.spurious_primes
    );
    Ok(format!(
        "{} primes; {} composite and {} unlisted entries itemized",
        scan.primes.len(),
        d.composite_entries.len(),
        d.unlisted_primes.len()
    ))
}

fn order_two() -> Outcome {
    let out = search(&SearchSpec::new(2, vec![t2()]).mode(SearchMode::FindOne))
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status == SearchStatus::ExhaustedNone,
        "status {}",
        out.status.as_str()
    );
    ensure!(out.nodes_explored == 2, "{} nodes", out.nodes_explored);
    Ok("EXHAUSTED_NONE after both Latin squares".into())
}

fn criterion_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 1..=15u64 {
        let units: Vec<u64> = (0..n).filter(|&u| gcd(u, n) == 1).collect();
        for &a in &units {
            for &c in &units {
                for b in 0..n {
                    let form =
                        TForm::new(n, a as i64, c as i64, b as i64).map_err(|e| e.to_string())?;
                    let t = form.materialize().map_err(|e| e.to_string())?;
                    let predicted = form.check_conditions().all();
                    ensure!(
                        predicted == t2_exhaustive(&t),
                        "n={n} a={a} c={c} b={b}: conditions say {predicted}"
                    );
                    checked += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{checked} forms, 0 mismatches, {:.2?}",
        start.elapsed()
    ))
}

fn wilson() -> Outcome {
    let w = wilson_params(&[5, 7, 8, 11]).map_err(|e| e.to_string())?;
    ensure!(
        (w.alpha, w.beta) == (2, 1),
        "alpha {} beta {}",
        w.alpha,
        w.beta
    );
    for v in 2..=1000u64 {
        let direct = (v * (v - 1)) % 2 == 0; // beta = 1 divides everything
        ensure!(w.admissible(v) == direct, "v = {v}");
        ensure!(w.admissible(v), "v = {v} not admissible");
    }
    Ok("alpha 2, beta 1; 2..=1000 admissible".into())
}

fn two_powers() -> Outcome {
    let start = Instant::now();
    for k in 2..=6 {
        let t = two_power_construct(k).map_err(|e| e.to_string())?;
        ensure!(t.order() == 1 << k, "k={k}: order {}", t.order());
        ensure!(t2_exhaustive(&t), "k={k} fails the identity");
    }
    let big = two_power_construct(11).map_err(|e| e.to_string())?;
    ensure!(big.order() == 2048, "order {}", big.order());
    CayleyTable::from_cells(2048, big.cells().to_vec())
        .map_err(|e| format!("order 2048 is not Latin: {e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7432);
    for _ in 0..100_000 {
        let (x, y) = (rng.gen_range(0..2048), rng.gen_range(0..2048));
        ensure!(t2_direct(&big, x, y), "order 2048 fails at x={x} y={y}");
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "k=2..6 exhaustive, k=11 sampled, {:.2?}",
        start.elapsed()
    ))
}

fn pbd_composition() -> Outcome {
    let circ = fixtures::CIRC5.table();
    let models = BTreeMap::from([(5, circ.clone())]);
    let t = pbd_compose(&Pbd::affine_plane(5), &models, &[t2()]).map_err(|e| e.to_string())?;
    ensure!(t.order() == 25, "order {}", t.order());
    ensure!(t.is_idempotent(), "order 25 not idempotent");
    ensure!(t2_exhaustive(&t), "order 25 fails the identity");
    let trivial = pbd_compose(&Pbd::trivial(5), &models, &[t2()]).map_err(|e| e.to_string())?;
    ensure!(
        trivial == circ,
        "trivial design does not reproduce the block model"
    );
    Ok("order 25 idempotent T2; trivial design reproduces circ5".into())
}

fn count_order_three() -> Outcome {
    // enumerate all 3x3 Latin squares from scratch
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut latin = 0;
    let mut models = 0u64;
    for r0 in &perms {
        for r1 in &perms {
            for r2 in &perms {
                let rows = [r0, r1, r2];
                let cols_ok = (0..3).all(|c| {
                    let col: BTreeSet<usize> = rows.iter().map(|r| r[c]).collect();
                    col.len() == 3
                });
                if !cols_ok {
                    continue;
                }
                latin += 1;
                let op = |x: usize, y: usize| rows[x][y];
                if (0..3).all(|x| (0..3).all(|y| op(x, op(y, op(y, x))) == y)) {
                    models += 1;
                }
            }
        }
    }
    ensure!(latin == 12, "oracle found {latin} Latin squares");
    let out = search(&SearchSpec::new(3, vec![t2()]).mode(SearchMode::Count))
        .map_err(|e| e.to_string())?;
    ensure!(
        out.count == Some(models),
        "search count {:?}, oracle {models}",
        out.count
    );
    Ok(format!("{models} models of 12 Latin squares"))
}

fn orthogonality() -> Outcome {
    for f in fixtures::ALL {
        let t = f.table();
        let conj = t.parastrophe(Parastrophe::SWAP_23);
        let ok = t.is_orthogonal_to(&conj).map_err(|e| e.to_string())?;
        ensure!(ok, "{} is not orthogonal to its (2 3)-parastrophe", f.name);
    }
    Ok("all 9 fixtures".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("fixture verification", fixture_verification),
        ("idempotency classification", idempotency_classification),
        ("residue-ring examples", modular_examples),
        ("polynomial scan vs listing", polynomial_scan),
        ("order-2 nonexistence", order_two),
        ("criterion equivalence n <= 15", criterion_equivalence),
        ("Wilson parameters", wilson),
        ("2^k construction", two_powers),
        ("PBD composition", pbd_composition),
        ("search vs Latin-square oracle", count_order_three),
        ("orthogonality to (2 3)-parastrophe", orthogonality),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
