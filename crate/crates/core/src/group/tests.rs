use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

fn f2() -> GroupModel {
    GroupModel::free(2).unwrap()
}

fn ll2() -> GroupModel {
    GroupModel::lamplighter(2).unwrap()
}

fn z2z3() -> GroupModel {
    GroupModel::free_product(vec![2, 3]).unwrap()
}

/// Uniform random word of the given length in the standard generators.
pub(crate) fn random_element(model: &GroupModel, len: usize, rng: &mut StdRng) -> GroupElement {
    let gens = model.standard_generators();
    let mut g = model.identity();
    for _ in 0..len {
        let s = &gens[rng.gen_range(0..gens.len())];
        g = model.multiply(&g, s).unwrap();
    }
    g
}

#[test]
fn model_validation() {
    assert!(GroupModel::free(1).is_err());
    assert!(GroupModel::lamplighter(1).is_err());
    assert!(GroupModel::free_product(vec![2, 2]).is_err());
    assert!(GroupModel::free_product(vec![2]).is_err());
    assert!(GroupModel::free_product(vec![2, 3]).is_ok());
    assert!(GroupModel::free_product(vec![2, 2, 2]).is_ok());
}

#[test]
fn free_reduction() {
    let m = f2();
    // a a^-1 b reduces to b
    let g = m.parse("a a^-1 b").unwrap();
    assert_eq!(g, m.parse("b").unwrap());
    // ab * ba = ab^2a
    let ab = m.parse("a b").unwrap();
    let ba = m.parse("b a").unwrap();
    let prod = m.multiply(&ab, &ba).unwrap();
    assert_eq!(prod, m.parse("a b^2 a").unwrap());
    assert_eq!(m.display(&prod), "a b^2 a");
    // a * a^-1 = e
    let a = m.parse("a").unwrap();
    let ainv = m.inverse(&a).unwrap();
    assert!(m.is_identity(&m.multiply(&a, &ainv).unwrap()));
}

#[test]
fn lamplighter_raw_pair_canonicalization() {
    let m = ll2();
    let raw = LampConfig::from_parts(
        vec![(BigInt::from(3), 2), (BigInt::from(0), 0)],
        BigInt::from(0),
        2,
    );
    // value 2 mod 2 and value 0 both vanish
    assert!(m.is_identity(&GroupElement::Lamplighter(raw)));
}

#[test]
fn lamplighter_wreath_law() {
    let m = ll2();
    // (lamp at 0, then shift) squared: lamps at {0,1}, cursor 2.
    let step = m.parse("t l0").unwrap(); // lamps {0}, cursor 1
    let sq = m.multiply(&step, &step).unwrap();
    assert_eq!(sq, m.parse("t^2 l0 l1").unwrap());
    // inverse round-trips
    let inv = m.inverse(&sq).unwrap();
    assert!(m.is_identity(&m.multiply(&sq, &inv).unwrap()));
    assert_eq!(m.inverse(&inv).unwrap(), sq);
}

#[test]
fn free_product_relators() {
    let m = z2z3();
    // x has order 2: x x y -> y
    let g = m.parse("x x y").unwrap();
    assert_eq!(g, m.parse("y").unwrap());
    // y has order 3: y^2 * y = e
    let y2 = m.parse("y^2").unwrap();
    let y = m.parse("y").unwrap();
    assert!(m.is_identity(&m.multiply(&y2, &y).unwrap()));
    // inverse of x y is y^2 x
    let xy = m.parse("x y").unwrap();
    assert_eq!(m.inverse(&xy).unwrap(), m.parse("y^2 x").unwrap());
}

#[test]
fn parse_errors_name_position() {
    let m = f2();
    match m.parse("a q") {
        Err(GroupError::Parse { position, .. }) => assert_eq!(position, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(m.parse("a^x").is_err());
    assert!(m.parse("").is_err());
}

#[test]
fn display_parse_round_trip() {
    let mut rng = StdRng::seed_from_u64(7);
    for model in [f2(), ll2(), GroupModel::lamplighter(3).unwrap(), z2z3()] {
        for len in [0, 1, 3, 8, 20] {
            let g = random_element(&model, len, &mut rng);
            let text = model.display(&g);
            let back = model.parse(&text).unwrap();
            assert_eq!(back, g, "round trip failed for `{text}` in {model}");
        }
    }
}

#[test]
fn ball_sizes_in_free_group() {
    let m = f2();
    let gens = GeneratingSet::standard(&m);
    let b0 = ball(&m, &gens, 0, DEFAULT_BALL_BUDGET).unwrap();
    assert_eq!(b0.len(), 1);
    let b1 = ball(&m, &gens, 1, DEFAULT_BALL_BUDGET).unwrap();
    assert_eq!(b1.len(), 5);
    let b2 = ball(&m, &gens, 2, DEFAULT_BALL_BUDGET).unwrap();
    assert_eq!(b2.len(), 17); // 1 + 4 + 12 reduced words
}

#[test]
fn ball_monotone_and_budgeted() {
    let m = f2();
    let gens = GeneratingSet::standard(&m);
    let b2 = ball(&m, &gens, 2, DEFAULT_BALL_BUDGET).unwrap();
    let b3 = ball(&m, &gens, 3, DEFAULT_BALL_BUDGET).unwrap();
    for g in b2.iter() {
        assert!(b3.contains(g));
    }
    match ball(&m, &gens, 6, 100) {
        Err(GroupError::BallCapacity { budget: 100, .. }) => {}
        other => panic!("expected capacity error, got {other:?}"),
    }
}

#[test]
fn bounded_length_examples() {
    let m = f2();
    let gens = GeneratingSet::standard(&m);
    let e = m.identity();
    assert_eq!(bounded_length(&m, &e, &gens, 10).unwrap(), Length::Finite(0));
    let abab = m.parse("a b a b").unwrap();
    assert_eq!(
        bounded_length(&m, &abab, &gens, 10).unwrap(),
        Length::Finite(4)
    );
    // a is not a power of b
    let only_b = GeneratingSet::symmetric(&m, vec![m.parse("b").unwrap()]).unwrap();
    let a = m.parse("a").unwrap();
    assert_eq!(bounded_length(&m, &a, &only_b, 5).unwrap(), Length::Over);
}

#[test]
fn bounded_length_matches_ball_distance() {
    let m = ll2();
    let gens = GeneratingSet::standard(&m);
    let b = ball(&m, &gens, 4, DEFAULT_BALL_BUDGET).unwrap();
    for g in b.iter() {
        let expected = b.distance(g).unwrap();
        let got = bounded_length(&m, g, &gens, 4).unwrap();
        assert_eq!(got, Length::Finite(expected), "element {g}");
    }
}

#[test]
fn standard_length_matches_bfs() {
    // The closed formulas agree with BFS distance on a small ball, per model.
    let mut checked = 0;
    for model in [f2(), ll2(), GroupModel::lamplighter(3).unwrap(), z2z3()] {
        let gens = GeneratingSet::standard(&model);
        let b = ball(&model, &gens, 4, DEFAULT_BALL_BUDGET).unwrap();
        for g in b.iter() {
            let formula = model.standard_length(g).unwrap();
            let bfs = b.distance(g).unwrap();
            assert_eq!(
                formula,
                bfs.into(),
                "length mismatch for {g} in {model}"
            );
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn group_axioms_random_sample() {
    // Associativity, identity and inverse laws on random triples per model.
    let mut rng = StdRng::seed_from_u64(11);
    for model in [f2(), ll2(), GroupModel::lamplighter(5).unwrap(), z2z3()] {
        let e = model.identity();
        for _ in 0..2_500 {
            let g = random_element(&model, rng.gen_range(0..12), &mut rng);
            let h = random_element(&model, rng.gen_range(0..12), &mut rng);
            let k = random_element(&model, rng.gen_range(0..12), &mut rng);
            let gh_k = model
                .multiply(&model.multiply(&g, &h).unwrap(), &k)
                .unwrap();
            let g_hk = model
                .multiply(&g, &model.multiply(&h, &k).unwrap())
                .unwrap();
            assert_eq!(gh_k, g_hk);
            assert_eq!(model.multiply(&g, &e).unwrap(), g);
            assert_eq!(model.multiply(&e, &g).unwrap(), g);
            let ginv = model.inverse(&g).unwrap();
            assert!(model.is_identity(&model.multiply(&g, &ginv).unwrap()));
            assert_eq!(model.inverse(&ginv).unwrap(), g);
        }
    }
}

#[test]
fn model_mismatch_is_an_error() {
    let free = f2();
    let lamp_elem = ll2().parse("t").unwrap();
    assert!(matches!(
        free.multiply(&free.identity(), &lamp_elem),
        Err(GroupError::ModelMismatch { .. })
    ));
}

#[test]
fn length_sub_additive_and_monotone_under_larger_sets() {
    let m = f2();
    let small = GeneratingSet::standard(&m);
    let larger = GeneratingSet::symmetric(
        &m,
        vec![
            m.parse("a").unwrap(),
            m.parse("b").unwrap(),
            m.parse("a b").unwrap(),
        ],
    )
    .unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..300 {
        let g = random_element(&m, rng.gen_range(0..6), &mut rng);
        let h = random_element(&m, rng.gen_range(0..6), &mut rng);
        let lg = bounded_length(&m, &g, &small, 12).unwrap().finite();
        let lh = bounded_length(&m, &h, &small, 12).unwrap().finite();
        let gh = m.multiply(&g, &h).unwrap();
        if let (Some(lg), Some(lh)) = (lg, lh) {
            let lgh = bounded_length(&m, &gh, &small, 24).unwrap().finite().unwrap();
            assert!(lgh <= lg + lh, "sub-additivity failed");
        }
        // A superset of generators can only shorten words.
        if let Some(ls) = bounded_length(&m, &g, &small, 12).unwrap().finite() {
            let ll = bounded_length(&m, &g, &larger, 12).unwrap().finite().unwrap();
            assert!(ll <= ls);
        }
    }
}
