use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;
use tandemcount::counts::{
    count_p_refined, count_p_series, count_p_to, count_s_prime_series, count_s_refined, count_s_series,
    count_s_tilde, count_s_tilde_refined, count_s_to, p_numbers, s_prime_refined,
};
use tandemcount::dp::{run_p_dp, run_s_dp, run_s_dp_refined, DpTable, NW, SE, UP};
use tandemcount::oracle::{p_census, s_census};
use tandemcount::series::SeriesPoly;
use tandemcount::walk::LatticePoint;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn s_table() -> &'static DpTable<BigUint> {
    static T: OnceLock<DpTable<BigUint>> = OnceLock::new();
    T.get_or_init(|| run_s_dp(14).unwrap())
}

fn p_table() -> &'static DpTable<BigUint> {
    static T: OnceLock<DpTable<BigUint>> = OnceLock::new();
    T.get_or_init(|| run_p_dp(14).unwrap())
}

#[test]
fn s_table_examples() {
    let t = run_s_dp(6).unwrap();
    assert_eq!(t.searrow(4, 2, 0).unwrap(), big(1));
    assert_eq!(t.searrow(3, 2, 0).unwrap(), big(0));
    assert_eq!(t.searrow(0, 0, 2).unwrap(), big(1));
    let layer0 = t.layer(0).unwrap();
    for i in 0..=6 {
        for j in 0..=layer0.height() {
            let expect = if (i, j) == (0, 2) { 1u32 } else { 0 };
            assert_eq!(layer0.entry(SE, i, j).unwrap(), big(expect as u64));
            assert_eq!(layer0.entry(NW, i, j).unwrap(), big(0));
        }
    }
}

#[test]
fn p_table_examples() {
    let t = run_p_dp(6).unwrap();
    let axis = |n: usize| (0..=n as i64).map(|i| t.searrow(n, i, 0).unwrap()).sum::<BigUint>();
    assert_eq!(axis(3), big(1));
    assert_eq!(axis(4), big(0));
    assert_eq!(t.searrow(0, 0, 0).unwrap(), big(1));
    assert!(t.uparrow(2, 0, 4).is_ok());
    assert!(run_s_dp(3).unwrap().uparrow(1, 0, 0).is_err());
}

#[test]
fn s_series_examples() {
    let s = count_s_series(11).unwrap();
    let expected = [3u64, 2, 3, 6, 14, 36, 102, 306, 972, 3216];
    assert_eq!(s.dense(2, 11).unwrap(), expected.map(BigInt::from).to_vec());
    let sp = count_s_prime_series(3).unwrap();
    assert_eq!(sp.dense(1, 3).unwrap(), [0, 1, 0].map(BigInt::from).to_vec());
    let two = count_s_series(2).unwrap();
    assert_eq!(two.len(), 1);
    assert_eq!(two.coeff(&[2]), BigInt::from(3));
}

#[test]
fn p_series_examples() {
    let p = count_p_series(12).unwrap();
    assert_eq!(p.dense(1, 4).unwrap(), [0, 0, 1, 0].map(BigInt::from).to_vec());
    assert_eq!(p.dense(5, 12).unwrap(), [3u64, 4, 15, 39, 122, 375, 1212, 3980].map(BigInt::from).to_vec());
}

#[test]
fn refined_examples() {
    let s = count_s_refined(9).unwrap().series;
    assert_eq!(s.coeff(&[5, 5, 8]), BigInt::from(78));
    assert_eq!(s.coeff(&[6, 4, 8]), BigInt::from(12));
    // Cat_4 Cat_2 - Cat_3^2
    assert_eq!(s.coeff(&[4, 7, 9]), BigInt::from(14 * 2 - 5 * 5));
    let st = count_s_tilde_refined(8).unwrap();
    assert_eq!(st.coeff(&[5, 4, 7]), BigInt::from(15));
    assert_eq!(st.coeff(&[3, 2, 3]), BigInt::from(1));
    let p = count_p_refined(7).unwrap();
    assert_eq!(p.coeff(&[2, 2, 2, 6]), BigInt::from(4));
    assert_eq!(p.coeff(&[3, 2, 2, 7]), BigInt::from(4));
    assert_eq!(p.coeff(&[1, 1, 1, 3]), BigInt::from(1));
}

#[test]
fn refinements_specialize() {
    let n = 16;
    let s = count_s_refined(n).unwrap().series;
    let s1 = s.specialize_to_one("u").unwrap().specialize_to_one("v").unwrap();
    assert_eq!(s1, count_s_series(n).unwrap());
    let st = count_s_tilde_refined(n).unwrap();
    let st1 = st.specialize_to_one("u").unwrap().specialize_to_one("v").unwrap();
    assert_eq!(st1, count_s_tilde(n).unwrap());
    let p = count_p_refined(n).unwrap();
    let p1 = ["u", "v", "w"].iter().fold(p, |acc, v| acc.specialize_to_one(v).unwrap());
    // the refined series also carries the empty walk at n = 0
    let mut expected = count_p_series(n).unwrap();
    expected.add_term(vec![0], BigInt::one());
    assert_eq!(p1, expected);
}

#[test]
fn sum_rules() {
    let m = 14;
    let refined = s_prime_refined(m).unwrap();
    let plain = count_s_prime_series(m).unwrap();
    for k in 1..=m as u32 {
        let total: BigUint = refined.iter().filter(|((a, b), _)| a + b == k + 2).map(|(_, v)| v.clone()).sum();
        assert_eq!(BigInt::from(total), plain.coeff(&[k]), "m = {k}");
    }
    let p = count_p_refined(14).unwrap();
    let (pn, _) = p_numbers(14).unwrap();
    for n in 3..=14u32 {
        let total: BigInt = p.terms().filter(|(e, _)| e[3] == n).map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigInt::from(pn[n as usize].clone()));
    }
}

#[test]
fn p_refined_is_symmetric_to_30() {
    let p = count_p_refined(30).unwrap();
    for (e, c) in p.terms() {
        let (a, b, w, n) = (e[0], e[1], e[2], e[3]);
        for perm in [[a, w, b], [b, a, w], [b, w, a], [w, a, b], [w, b, a]] {
            assert_eq!(&p.coeff(&[perm[0], perm[1], perm[2], n]), c, "{e:?}");
        }
    }
}

#[test]
fn s_refined_is_symmetric() {
    let s = count_s_refined(24).unwrap().series;
    for (e, c) in s.terms() {
        assert_eq!(&s.coeff(&[e[1], e[0], e[2]]), c, "{e:?}");
    }
}

#[test]
fn p_growth_is_monotone_from_5() {
    let (p, _) = p_numbers(60).unwrap();
    assert!(p[5..].windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn tilde_times_cube_recovers_input() {
    let n = 30;
    let mut tilde = count_s_tilde(n).unwrap();
    tilde.add_term(vec![0], BigInt::one());
    let mut cube = SeriesPoly::one(&["t"]);
    cube.add_term(vec![1], BigInt::one());
    let cube = cube.pow_truncated(3, None).unwrap();
    let back = tilde.mul_truncated(&cube, Some(n as u32)).unwrap();
    let mut expected = count_s_series(n).unwrap();
    expected.add_term(vec![0], BigInt::one());
    expected.add_term(vec![1], BigInt::from(3));
    assert_eq!(back, expected);
    assert!(count_s_tilde(n).unwrap().terms().all(|(_, c)| *c >= BigInt::zero()));
}

#[test]
fn counts_to_points() {
    assert_eq!(count_p_to(0, LatticePoint::ORIGIN).unwrap(), big(1));
    assert_eq!(count_s_to(4, LatticePoint::new(2, 0)).unwrap(), big(1));
    let census = p_census(3, 1, 9).unwrap();
    let oracle: BigUint = [SE, NW, UP].iter().filter_map(|f| census.get(&(*f, 1, 1))).sum();
    assert_eq!(count_p_to(3, LatticePoint::new(1, 1)).unwrap(), oracle);
}

#[test]
fn refined_table_totals_match_plain_table() {
    let plain = run_s_dp(8).unwrap();
    let refined = run_s_dp_refined(8).unwrap();
    for n in 0..=8 {
        let l = plain.layer(n).unwrap();
        for i in 0..=n as i64 {
            for j in 0..=l.height() {
                assert_eq!(refined.searrow(n, i, j).unwrap().total(), plain.searrow(n, i, j).unwrap());
                assert_eq!(refined.nwarrow(n, i, j).unwrap().total(), plain.nwarrow(n, i, j).unwrap());
            }
        }
    }
}

#[test]
fn tables_are_deterministic() {
    let a = count_s_refined(20).unwrap().series.to_json("s", &[]).unwrap();
    let b = count_s_refined(20).unwrap().series.to_json("s", &[]).unwrap();
    assert_eq!(a, b);
}

fn cell(t: &DpTable<BigUint>, f: usize, n: usize, i: i64, j: i64) -> BigUint {
    if i < 0 || j < 0 {
        return BigUint::zero();
    }
    let l = t.layer(n).unwrap();
    l.entry(f, i, j).expect("inside the table")
}

proptest! {
    #[test]
    fn s_recurrence_holds(n in 1usize..=14, i in 0i64..=14, j in 0i64..=10) {
        let t = s_table();
        let h = t.layer(n).unwrap().height();
        prop_assume!(i <= n as i64 && j + 3 <= h);
        let both = |m: usize, a: i64, b: i64| cell(t, SE, m, a, b) + cell(t, NW, m, a, b);
        prop_assert_eq!(cell(t, SE, n, i, j), both(n - 1, i - 1, j + 1));
        let mut nw = both(n, i + 2, j - 2) + cell(t, NW, n, i + 2, j) + cell(t, NW, n, i, j - 2);
        nw += if j % 2 == 1 { both(n, i + 1, j - 3) } else { both(n, i + 3, j - 1) };
        prop_assert_eq!(cell(t, NW, n, i, j), nw);
    }

    #[test]
    fn p_recurrence_holds(n in 1usize..=14, i in 0i64..=14, j in 0i64..=10) {
        let t = p_table();
        let h = t.layer(n).unwrap().height();
        prop_assume!(i <= n as i64 && j + 3 <= h);
        let all = |m: usize, a: i64, b: i64| [SE, NW, UP].iter().map(|&f| cell(t, f, m, a, b)).sum::<BigUint>();
        prop_assert_eq!(cell(t, SE, n, i, j), all(n - 1, i - 1, j + 1));
        let mut nw = all(n - 1, i + 1, j - 1) + cell(t, NW, n, i + 2, j);
        nw += if j % 2 == 1 { all(n - 1, i + 2, j) } else { all(n - 1, i, j - 2) };
        prop_assert_eq!(cell(t, NW, n, i, j), nw);
        prop_assert_eq!(cell(t, UP, n, i, j), cell(t, NW, n, i, j - 2) + cell(t, UP, n, i, j - 2));
    }

    #[test]
    fn point_counts_match_census(n in 0usize..=6, x in 0i64..=6, y in 0i64..=4) {
        let census = p_census(n, y, 9).unwrap();
        let oracle: BigUint = [SE, NW, UP].iter().filter_map(|f| census.get(&(*f, x, y))).sum();
        prop_assert_eq!(count_p_to(n, LatticePoint::new(x, y)).unwrap(), oracle);
        let census = s_census(n, y, 9).unwrap();
        let oracle: BigUint = [SE, NW].iter().filter_map(|f| census.get(&(*f, x, y))).sum();
        prop_assert_eq!(count_s_to(n, LatticePoint::new(x, y)).unwrap(), oracle);
    }
}
