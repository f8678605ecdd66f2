//! One PASS/FAIL line per acceptance criterion. Lines go to the raw stdout
//! handle so they show up without --nocapture.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl3_core::cli::DEFAULT_SEED;
use sl3_core::generators::{binomial_sum, count_formula, dimension_crosscheck, enumerate_minimal_set};
use sl3_core::identities::{cyclic_sum_rhs, fundamental_relation, random_word, rank2sum, Mode};
use sl3_core::reducer::{class_rules, reduce_to_minimal};
use sl3_core::relmat::{build_relation_matrix, exact_rank, reference_kept, six5_kept_for, validate_complement, Family};
use sl3_core::trpoly::TracePolynomial;
use sl3_core::verify::{embedding, identities, reduction, Check};
use sl3_core::word::{CyclicKey, Word};

const RANK120_BUDGET: Duration = Duration::from_secs(10);
const IDENTITY_BUDGET: Duration = Duration::from_secs(60);
const REDUCTION_BUDGET: Duration = Duration::from_secs(300);
const IDENTITY_TRIALS: usize = 100;
const REDUCTION_WORDS: usize = 200;
const EMBED_REPS: usize = 20;
const CRITERION9_SAMPLES: usize = 200;

fn report(results: &mut Vec<bool>, n: usize, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{tag} criterion {n}: {detail}").unwrap();
    results.push(ok);
}

fn all_pass(c: &[Check]) -> bool {
    c.iter().all(|c| c.passed)
}

fn failures(c: &[Check]) -> String {
    let f: Vec<String> = c.iter().filter(|c| !c.passed).map(Check::line).collect();
    if f.is_empty() {
        String::new()
    } else {
        format!(" failing=[{}]", f.join("; "))
    }
}

#[test]
fn acceptance() {
    let seed = DEFAULT_SEED;
    let mut results = Vec::new();

    // 1
    let small: Vec<u128> = [1, 2, 3, 6].iter().map(|&r| count_formula(r)).collect();
    let agree = (1..=10).all(|r| count_formula(r) == binomial_sum(r));
    report(
        &mut results,
        1,
        small == [2, 9, 45, 1629] && agree,
        format!("N_1,2,3,6={small:?} formula==binomial sum for r=1..10: {agree}"),
    );

    // 2
    let totals: Vec<u128> = (1..=3).map(|r| dimension_crosscheck(r).unwrap().total).collect();
    let cross = (1..=6).all(|r| dimension_crosscheck(r).unwrap().passed);
    report(
        &mut results,
        2,
        totals == [3, 11, 48] && cross,
        format!("dimension totals r=1..3 {totals:?}, sum-r==N_r for r=1..6: {cross}"),
    );

    // 3; six6 is built here first, so its time includes construction
    let t = Instant::now();
    let big = build_relation_matrix(Family::SixInSix).unwrap();
    let big_rank = exact_rank(&big);
    let big_time = t.elapsed();
    let ranks = [
        exact_rank(&build_relation_matrix(Family::FiveInFive).unwrap()),
        exact_rank(&build_relation_matrix(Family::SixInFive).unwrap()),
        big_rank,
    ];
    report(
        &mut results,
        3,
        ranks == [12, 5, 105] && (big.rows(), big.cols()) == (120, 120) && big_time < RANK120_BUDGET,
        format!("ranks {ranks:?}, 120x120 in {:.2}s (budget {}s)", big_time.as_secs_f64(), RANK120_BUDGET.as_secs()),
    );

    // 4
    let mut kept_ok = Vec::new();
    for f in Family::ALL {
        let m = build_relation_matrix(f).unwrap();
        kept_ok.push(validate_complement(&m, &reference_kept(f)).unwrap());
    }
    let per_k = (1..=5u32).all(|k| {
        let mut pattern = vec![1; 5];
        pattern[k as usize - 1] = 2;
        let c = class_rules(&pattern).unwrap();
        let mut want = six5_kept_for(k);
        want.sort();
        c.rank == 17 && c.kept == want
    });
    let sizes: Vec<usize> = Family::ALL.iter().map(|&f| reference_kept(f).len()).collect();
    report(
        &mut results,
        4,
        kept_ok.iter().all(|&b| b) && per_k && sizes == [12, 7, 15],
        format!("kept sets {sizes:?} valid {kept_ok:?}, six5 under (k 5) for k=1..5: {per_k}"),
    );

    // 5
    let t = Instant::now();
    let exact = identities(Mode::Exact, IDENTITY_TRIALS, seed).unwrap();
    let numeric = identities(Mode::Numeric, IDENTITY_TRIALS, seed).unwrap();
    let id_time = t.elapsed();
    report(
        &mut results,
        5,
        all_pass(&exact) && all_pass(&numeric) && id_time < IDENTITY_BUDGET,
        format!(
            "{} cases x {IDENTITY_TRIALS} exact + {IDENTITY_TRIALS} numeric trials in {:.1}s (budget {}s){}{}",
            exact.len(),
            id_time.as_secs_f64(),
            IDENTITY_BUDGET.as_secs(),
            failures(&exact),
            failures(&numeric)
        ),
    );

    // 6
    let t = Instant::now();
    let red = reduction(Mode::Exact, REDUCTION_WORDS, seed).unwrap();
    let red_time = t.elapsed();
    report(
        &mut results,
        6,
        all_pass(&red) && red_time < REDUCTION_BUDGET,
        format!(
            "{REDUCTION_WORDS} words x 10 exact reps, symbols in W_r, in {:.1}s (budget {}s){}",
            red_time.as_secs_f64(),
            REDUCTION_BUDGET.as_secs(),
            failures(&red)
        ),
    );

    // 7
    let w2: HashSet<CyclicKey> = enumerate_minimal_set(2).unwrap().into_iter().map(|g| g.key).collect();
    let nine: HashSet<CyclicKey> = [
        vec![1],
        vec![2],
        vec![-1],
        vec![-2],
        vec![1, 2],
        vec![1, -2],
        vec![-1, 2],
        vec![-1, -2],
        vec![1, 2, -1, -2],
    ]
    .iter()
    .map(|u| CyclicKey::from_units(u))
    .collect();
    let comm = reduce_to_minimal(&TracePolynomial::t(&[2, 1, -2, -1]), 2).unwrap();
    report(
        &mut results,
        7,
        w2 == nine && comm == rank2sum().1,
        format!("W_2 has the nine generators: {}, t(2,1,-2,-1) reduces to the rank-2 sum: {}", w2 == nine, comm == rank2sum().1),
    );

    // 8
    let emb = embedding(Mode::Exact, EMBED_REPS, seed).unwrap();
    report(
        &mut results,
        8,
        all_pass(&emb),
        format!("r=1..4, {EMBED_REPS} reps x 20 conjugators (odd trials det != 1), exact equality{}", failures(&emb)),
    );

    // 9
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_weight = 0;
    let mut degree_ok = true;
    for _ in 0..CRITERION9_SAMPLES {
        let s: Vec<Word> = (0..6).map(|_| Word::letter(rng.random_range(1..=6), 1)).collect();
        let f = fundamental_relation(&s[0], &s[1], &s[2], &s[3], &s[4], &s[5]);
        worst_weight = worst_weight.max(f.max_symbol_weight());
        let c: Vec<Word> = (0..4).map(|_| random_word(&mut rng, 5, 1, 3)).collect();
        let bound = c.iter().map(|w| w.units().len()).sum::<usize>() - 1;
        let rhs = cyclic_sum_rhs(&c[0], &c[1], &c[2], &c[3]);
        let deg = rhs.symbols().iter().map(|k| k.units().len()).max().unwrap_or(0);
        degree_ok &= deg <= bound;
    }
    report(
        &mut results,
        9,
        worst_weight < 6 && degree_ok,
        format!("{CRITERION9_SAMPLES} samples: max symbol weight {worst_weight} < 6, cyclic sum degree within bound: {degree_ok}"),
    );

    let passed = results.iter().filter(|&&b| b).count();
    writeln!(std::io::stdout().lock(), "acceptance: {passed}/{} criteria pass", results.len()).unwrap();
    assert_eq!(passed, results.len());
}
