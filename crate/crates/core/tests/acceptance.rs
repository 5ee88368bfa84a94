//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or overruns its time limit.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cdindex_core::bruhat::enumerate_paths;
use cdindex_core::cdindex::{admissible_degrees, complete_phi_by_enumeration};
use cdindex_core::flips::{check_dyer_property, Orientation};
use cdindex_core::ncpoly::{cd_monomials, expand_cd};
use cdindex_core::sweep::{all_intervals, flip_verdict_table, positivity_verdict_table, sample_intervals};
use cdindex_core::{
    complete_cd_index, complete_cd_index_under, flag_cd_index_oracle, shelling_decomposition,
    AdMonomial, AdPolynomial, BruhatInterval, BruhatPath, CdMonomial, OrderSpec, Permutation,
    ReflectionOrder, TSetTable,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLE_SEED: u64 = 0x5eed_cd01;
const S5_SAMPLES: usize = 200;
const ORACLE_SAMPLES_PER_GROUP: usize = 25;

/// Degree-4 coefficients of c²d, cdc and dc² for [2134, 4321].
const GOLDEN_X: i64 = 1;
const GOLDEN_Y: i64 = 2;
const GOLDEN_Z: i64 = 1;

type Check = Box<dyn FnOnce() -> Result<String, String>>;

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn cdm(s: &str) -> CdMonomial {
    s.parse().unwrap()
}

fn lex(n: usize) -> ReflectionOrder {
    ReflectionOrder::lex(n).unwrap()
}

fn example() -> BruhatInterval {
    BruhatInterval::build(p("2134"), p("4321")).unwrap()
}

fn s4() -> Vec<BruhatInterval> {
    common::intervals(4)
}

fn s5_sample(count: usize, seed: u64) -> Vec<BruhatInterval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_intervals(5, count, &mut rng)
        .unwrap()
        .into_iter()
        .map(|(u, v)| BruhatInterval::build(u, v).unwrap())
        .collect()
}

fn names(order: &ReflectionOrder, paths: &[BruhatPath]) -> Vec<String> {
    let mut out: Vec<String> = paths.iter().map(|x| x.rank_string(order)).collect();
    out.sort();
    out
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn worked_example() -> Result<String, String> {
    let iv = example();
    let o = lex(4);
    let mut t = TSetTable::new(&iv, &o);
    let u = iv.lower();
    let mut set = |m: &str| -> Result<Vec<String>, String> {
        Ok(names(&o, &t.compute_t(u, &cdm(m)).map_err(|e| e.to_string())?))
    };
    expect_eq("T_cc", set("cc")?, vec!["235".into(), "346".into()])?;
    expect_eq("T_cccc", set("cccc")?, vec!["23456".to_string()])?;
    expect_eq("T_d", set("d")?, vec!["436".to_string()])?;
    expect_eq("T_dd", set("dd")?, vec!["41516".to_string()])?;

    let da: AdMonomial = "DA".parse().unwrap();
    let a: AdMonomial = "A".parse().unwrap();
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for x in enumerate_paths(&iv, 2, &o).into_iter().filter(|x| x.ad_word(&o) == da) {
        let y = t.flip(Orientation::Forward, &x.tail(1), &a).map_err(|e| e.to_string())?;
        let z = x.with_tail(1, &y);
        if z.ad_word(&o).to_string() == "AD" {
            accepted.push(z.rank_string(&o));
        } else {
            rejected.push(z.rank_string(&o));
        }
    }
    expect_eq("accepted flips", accepted, vec!["462".to_string()])?;
    expect_eq("rejected flips", rejected, vec!["521".to_string(), "652".to_string()])?;

    let ada: AdMonomial = "ADA".parse().unwrap();
    for (w, fwd, rev) in [("2143", "3416", "4361"), ("2314", "1516", "5361")] {
        let f = t.t_word(Orientation::Forward, p(w), &ada).map_err(|e| e.to_string())?;
        let r = t.t_word(Orientation::Reverse, p(w), &ada).map_err(|e| e.to_string())?;
        expect_eq(&format!("T_ADA({w},v)"), names(&o, &f), vec![fwd.to_string()])?;
        expect_eq(&format!("reverse T_ADA({w},v)"), names(&o, &r), vec![rev.to_string()])?;
    }
    Ok("all quoted sets and flips reproduced".into())
}

fn example_cd_index() -> Result<String, String> {
    let iv = example();
    let psi = complete_cd_index(&iv).map_err(|e| e.to_string())?;
    expect_eq("degree 2", psi.degree(2).to_string(), "2c^2+d".to_string())?;
    let four = psi.degree(4);
    expect_eq("c^4", four.coefficient(&cdm("cccc")), 1)?;
    expect_eq("d^2", four.coefficient(&cdm("dd")), 1)?;
    let (x, y, z) = (
        four.coefficient(&cdm("ccd")),
        four.coefficient(&cdm("cdc")),
        four.coefficient(&cdm("dcc")),
    );
    expect_eq("(x, y, z)", (x, y, z), (GOLDEN_X, GOLDEN_Y, GOLDEN_Z))?;
    expect_eq("degrees", psi.by_degree.keys().copied().collect::<Vec<_>>(), vec![2, 4])?;
    // Independent route: enumerate paths, then solve the cd system exactly.
    let phi = complete_phi_by_enumeration(&iv, &lex(4));
    for n in [2, 4] {
        let solved = common::solve_cd(&common::word_map(&phi.homogeneous_part(n)), n)
            .ok_or(format!("oracle found no integral cd form in degree {n}"))?;
        let ours: BTreeMap<String, i64> = psi.degree(n).to_string_map();
        expect_eq(&format!("oracle degree {n}"), ours, solved)?;
    }
    Ok(format!("{} and {four}", psi.degree(2)))
}

fn order_independence() -> Result<String, String> {
    let specs = [OrderSpec::Lex, OrderSpec::Rev, OrderSpec::default_word(4)];
    let orders: Vec<ReflectionOrder> = specs.iter().map(|s| s.build(4).unwrap()).collect();
    let mut count = 0;
    for iv in s4() {
        let reference = complete_cd_index_under(&iv, &orders[0]).map_err(|e| e.to_string())?;
        for (spec, o) in specs.iter().zip(&orders).skip(1) {
            let other = complete_cd_index_under(&iv, o).map_err(|e| e.to_string())?;
            if other != reference {
                return Err(format!(
                    "[{}, {}]: lex gives {}, {spec} gives {}",
                    iv.lower(),
                    iv.upper(),
                    reference.total(),
                    other.total()
                ));
            }
        }
        count += 1;
    }
    Ok(format!("{count} intervals agree under lex, rev and {}", specs[2]))
}

fn counting_identity() -> Result<String, String> {
    let o = lex(4);
    let mut checks = 0;
    for iv in s4() {
        let psi = complete_cd_index(&iv).map_err(|e| e.to_string())?;
        let mut t = TSetTable::new(&iv, &o);
        let parity = (iv.length() + 1) % 2;
        for n in (parity..=5).step_by(2) {
            for mono in cd_monomials(n) {
                let r = t.verify_coefficient(&mono, &psi).map_err(|e| e.to_string())?;
                if !r.is_consistent() {
                    return Err(format!("[{}, {}] {mono}: {r:?}", iv.lower(), iv.upper()));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (interval, monomial) pairs with sum s_M = coefficient = |T| = |reverse T|"))
}

fn dyer_property() -> Result<String, String> {
    let mut all = s4();
    all.extend(s5_sample(S5_SAMPLES, SAMPLE_SEED));
    for iv in &all {
        let o = lex(iv.lower().rank());
        if let Err(v) = check_dyer_property(iv, &o) {
            return Err(format!(
                "[{}, {}] length {}: ascending {} vs descending {}",
                iv.lower(),
                iv.upper(),
                v.n,
                v.ascending.rank_string(&o),
                v.descending.rank_string(&o)
            ));
        }
    }
    Ok(format!("{} intervals (all of S4, {S5_SAMPLES} sampled from S5)", all.len()))
}

fn at_most_one_d() -> Result<String, String> {
    let mut all = s4();
    all.extend(s5_sample(S5_SAMPLES, SAMPLE_SEED));
    let mut checked = 0;
    for iv in &all {
        let psi = complete_cd_index(iv).map_err(|e| e.to_string())?;
        for n in admissible_degrees(iv) {
            for mono in cd_monomials(n).into_iter().filter(|m| m.d_count() <= 1) {
                let c = psi.coefficient(&mono);
                if c < 0 {
                    return Err(format!("[{}, {}] {mono}: {c}", iv.lower(), iv.upper()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} coefficients over {} intervals", all.len()))
}

fn shelling_theorem() -> Result<String, String> {
    let o = lex(4);
    let a: AdMonomial = "A".parse().unwrap();
    let mut checks = 0;
    for iv in s4() {
        let mut t = TSetTable::new(&iv, &o);
        for &refl in o.sequence() {
            let dec = shelling_decomposition(&iv, refl, &o).map_err(|e| e.to_string())?;
            for n in admissible_degrees(&iv) {
                let lhs = &expand_cd(&dec.f(n)) + &expand_cd(&dec.g(n)).left_mul(&a);
                let rhs = cdindex_core::phi_leq_t(&iv, n, refl, &o);
                let residual: AdPolynomial = &lhs - &rhs;
                if !residual.is_zero() {
                    return Err(format!("[{}, {}] t={refl} n={n}: residual {residual}", iv.lower(), iv.upper()));
                }
                for mono in cd_monomials(n) {
                    let r = t.check_restricted_counts(&mono, &dec).map_err(|e| e.to_string())?;
                    if !r.is_consistent() {
                        return Err(format!("[{}, {}] {r:?}", iv.lower(), iv.upper()));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} (interval, t, monomial) count checks, all residuals zero"))
}

fn verdict_tables_agree() -> Result<String, String> {
    let o = lex(4);
    let items = all_intervals(4, 6).unwrap();
    let flips = flip_verdict_table(&items, &o).map_err(|e| e.to_string())?;
    let signs = positivity_verdict_table(&items, &o).map_err(|e| e.to_string())?;
    if flips.len() != signs.len() {
        return Err(format!("table sizes differ: {} vs {}", flips.len(), signs.len()));
    }
    for ((k1, a), (k2, b)) in flips.iter().zip(&signs) {
        if k1 != k2 || a != b {
            return Err(format!(
                "z={} u={} v={} M'={}: flip verdict {a}, negative coefficient {b}",
                k1.z, k1.u, k1.v, k1.m_prime
            ));
        }
    }
    // Whole-interval flip condition, against the sign table.
    let mut violations = 0;
    for iv in s4() {
        let mut t = TSetTable::new(&iv, &o);
        for n in admissible_degrees(&iv) {
            for mono in cd_monomials(n) {
                if !t.check_flip_condition(&mono).map_err(|e| e.to_string())?.holds() {
                    violations += 1;
                }
            }
        }
    }
    let negative = signs.values().filter(|b| **b).count();
    if (violations == 0) != (negative == 0) {
        return Err(format!("{violations} flip violations but {negative} negative coefficients"));
    }
    Ok(format!(
        "{} keys agree; {violations} flip violations, {negative} negative coefficients",
        flips.len()
    ))
}

fn oracle_cross_check() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 1);
    let mut items = sample_intervals(4, ORACLE_SAMPLES_PER_GROUP, &mut rng).unwrap();
    items.extend(sample_intervals(5, ORACLE_SAMPLES_PER_GROUP, &mut rng).unwrap());
    for (u, v) in &items {
        let iv = BruhatInterval::build(*u, *v).unwrap();
        let psi = complete_cd_index(&iv).map_err(|e| e.to_string())?;
        let top = psi.degree(iv.length() - 1);
        let flag = flag_cd_index_oracle(&iv).map_err(|e| e.to_string())?;
        if top != flag {
            return Err(format!("[{u}, {v}]: top degree {top}, flag oracle {flag}"));
        }
    }
    Ok(format!("{} intervals ({ORACLE_SAMPLES_PER_GROUP} from S4, {ORACLE_SAMPLES_PER_GROUP} from S5)", items.len()))
}

fn main() {
    let criteria: Vec<(&str, Duration, Check)> = vec![
        ("worked example path sets and flips", Duration::from_secs(1), Box::new(worked_example)),
        ("cd-index of the worked example", Duration::from_secs(1), Box::new(example_cd_index)),
        ("order independence on S4", Duration::from_secs(60), Box::new(order_independence)),
        ("sum of s_M equals coefficient and path-set sizes on S4", Duration::from_secs(600), Box::new(counting_identity)),
        ("first reflections of ascending vs descending paths", Duration::from_secs(600), Box::new(dyer_property)),
        ("non-negativity for monomials with at most one d", Duration::from_secs(600), Box::new(at_most_one_d)),
        ("restricted sums decompose and match restricted counts on S4", Duration::from_secs(900), Box::new(shelling_theorem)),
        ("flip verdicts match signs of g on S4", Duration::from_secs(600), Box::new(verdict_tables_agree)),
        ("top degree against the flag f-vector oracle", Duration::from_secs(600), Box::new(oracle_cross_check)),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(Ok(detail)) if elapsed <= limit => (true, detail),
            Ok(Ok(detail)) => (false, format!("{detail}; exceeded time limit")),
            Ok(Err(e)) => (false, e),
            Err(_) => (false, "panicked".to_string()),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} [{:.3}s / limit {}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
