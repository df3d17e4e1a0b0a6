use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zetaforge::exactalg::{parse_poly, MPoly};
use zetaforge::fpgeom::{count_points, fano_count, find_line};
use zetaforge::grouppres::{hypothesis_report, Presentation};
use zetaforge::oracle::{
    compare_report, enumerate_sublattices, ideal_counts, integer_series, lattice_type, sublattice_count,
    weight_wprime,
};
use zetaforge::zetacore::zeta_lattice;

const BUDGET: u64 = 1 << 40;

fn sum_of_squares() -> Presentation {
    Presentation::from_entries(
        4,
        2,
        &[(1, 3, vec![1, 0]), (1, 4, vec![0, 1]), (2, 3, vec![0, 1]), (2, 4, vec![-1, 0])],
    )
    .unwrap()
}

#[test]
fn sublattice_counts_match_the_lattice_zeta_function() {
    for h in 1..=5 {
        let z = zeta_lattice(h).unwrap();
        for p in [2u64, 3] {
            let expected = integer_series(&z, p, 5).unwrap();
            for n in 0..=5u32 {
                assert_eq!(sublattice_count(h as usize, p, n), expected[n as usize], "h = {h}, p = {p}, N = {n}");
                if h <= 3 && n <= 3 {
                    let listed = enumerate_sublattices(h as usize, p, n, BUDGET).unwrap().len();
                    assert_eq!(BigInt::from(listed), expected[n as usize]);
                }
            }
        }
    }
}

#[test]
fn ideal_counts_are_prefix_stable() {
    let g = Presentation::grenham(3).unwrap();
    let long = ideal_counts(&g, 2, 4, BUDGET).unwrap();
    for n in 0..4 {
        assert_eq!(ideal_counts(&g, 2, n, BUDGET).unwrap()[..], long[..=n as usize]);
    }
}

#[test]
fn ideal_counts_do_not_depend_on_worker_count() {
    let g = sum_of_squares();
    let with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ideal_counts(&g, 3, 3, BUDGET).unwrap())
    };
    let one = with(1);
    assert_eq!(one, with(3));
    assert_eq!(one, with(8));
}

#[test]
fn weight_without_points_is_the_index_sum() {
    let g = sum_of_squares();
    for p in [3u64, 7] {
        assert_eq!(count_points(&parse_poly("y1^2 + y2^2").unwrap(), 2, p, BUDGET).unwrap(), 0);
        for w in 1..=4 {
            for b in enumerate_sublattices(2, p, w, BUDGET).unwrap() {
                if !b.is_maximal(p) {
                    continue;
                }
                let t = lattice_type(&b, p).unwrap();
                let expected: u32 = t.set.iter().zip(&t.r).map(|(i, r)| r * (4 + 2 - i)).sum();
                assert_eq!(weight_wprime(&g, &b, p).unwrap(), expected, "p = {p}, {:?}", b.rows());
            }
        }
    }
}

#[test]
fn good_primes_agree_three_ways() {
    let cases = [
        (Presentation::heisenberg(), 3u64, 5u32),
        (Presentation::grenham(3).unwrap(), 3, 4),
        (sum_of_squares(), 5, 3),
        (sum_of_squares(), 7, 3),
    ];
    for (pres, p, n) in cases {
        if pres.d() % 2 == 0 {
            assert!(hypothesis_report(&pres, p, true, BUDGET).unwrap().passes());
        }
        let report = compare_report(&pres, p, n, BUDGET).unwrap();
        assert!(report.agree, "{report:?}");
        assert_eq!(report.verdict, "agree");
    }
}

#[test]
fn bad_prime_is_flagged() {
    let report = compare_report(&sum_of_squares(), 2, 3, BUDGET).unwrap();
    let hypotheses = report.hypotheses.as_ref().unwrap();
    assert!(!hypotheses.passes());
    assert!(["agree", "expected at bad prime"].contains(&report.verdict.as_str()));
}

fn random_form(rng: &mut ChaCha8Rng, m: usize, degree: u32, p: u64) -> MPoly {
    let mut text = String::new();
    for _ in 0..6 {
        let c = rng.gen_range(1..p);
        let mut exps = vec![0u32; m];
        for _ in 0..degree {
            exps[rng.gen_range(0..m)] += 1;
        }
        let mono: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, e)| format!("y{}^{e}", k + 1))
            .collect();
        text.push_str(&format!("+{c}*{}", mono.join("*")));
    }
    parse_poly(&text).unwrap()
}

#[test]
fn point_counts_match_zero_dimensional_fano_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        for (m, p) in [(3, 3u64), (4, 2), (4, 3)] {
            let f = random_form(&mut rng, m, 2, p);
            assert_eq!(count_points(&f, m, p, BUDGET).unwrap(), fano_count(&f, m, p, 0, BUDGET).unwrap(), "{f}");
        }
    }
}

#[test]
fn line_search_agrees_with_line_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        for (m, p) in [(4, 2u64), (4, 3)] {
            let f = random_form(&mut rng, m, 3, p);
            let found = find_line(&f, m, p, BUDGET).unwrap().is_some();
            let lines = fano_count(&f, m, p, 1, BUDGET).unwrap();
            assert_eq!(found, lines > 0, "{f}");
        }
    }
}

#[test]
fn klein_quadric_points_at_five() {
    let klein = parse_poly("y1*y6 - y2*y5 + y3*y4").unwrap();
    assert_eq!(count_points(&klein, 6, 5, BUDGET).unwrap(), 26 * 31);
}
