use super::*;
use num_traits::Signed;
use proptest::prelude::*;

fn knot(name: &str) -> SeifertMatrix {
    SeifertMatrix::named(name).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ints(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

fn zeta(m: u64, p: i64) -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(m, p)
}

#[test]
fn shipped_table() {
    let names: Vec<String> = builtin_knots().into_iter().map(|k| k.name).collect();
    assert_eq!(names, ["unknot", "trefoil_right", "trefoil_left", "figure8"]);
    assert_eq!(knot("trefoil_left"), knot("trefoil_right").mirror());
    assert!(SeifertMatrix::named("granny").is_err());
}

#[test]
fn validation() {
    assert!(matches!(SeifertMatrix::new(vec![vec![1]]), Err(Error::InvalidSeifert(_))));
    assert!(matches!(
        SeifertMatrix::new(vec![vec![1, 0], vec![0, 1]]),
        Err(Error::InvalidSeifert(_))
    ));
    assert!(matches!(SeifertMatrix::new(vec![vec![1, 0]]), Err(Error::InvalidSeifert(_))));
    let bad: std::result::Result<SeifertMatrix, _> = serde_json::from_str("[[1,0],[0,1]]");
    assert!(bad.is_err());
    let good: SeifertMatrix = serde_json::from_str("[[-1,1],[0,-1]]").unwrap();
    assert_eq!(good, knot("trefoil_right"));
}

#[test]
fn signatures_at_minus_one() {
    let minus_one = CyclotomicNumber::from_integer(-1);
    assert_eq!(lt_signature(&knot("trefoil_right"), &minus_one).unwrap(), -2);
    assert_eq!(lt_signature(&knot("trefoil_left"), &minus_one).unwrap(), 2);
    assert_eq!(lt_signature(&knot("figure8"), &minus_one).unwrap(), 0);
    assert_eq!(lt_signature(&SeifertMatrix::unknot(), &zeta(7, 3)).unwrap(), 0);
    assert_eq!(
        lt_signature(&knot("trefoil_right"), &CyclotomicNumber::from_integer(1)),
        Err(Error::TrivialCharacter)
    );
}

#[test]
fn signature_vanishes_near_one() {
    for name in ["trefoil_right", "trefoil_left", "figure8"] {
        assert_eq!(lt_signature(&knot(name), &zeta(64, 1)).unwrap(), 0, "{name}");
    }
}

#[test]
fn alexander_polynomials() {
    assert_eq!(alexander_polynomial(&knot("trefoil_right")), ints(&[1, -1, 1]));
    assert_eq!(alexander_polynomial(&knot("figure8")), ints(&[-1, 3, -1]));
    assert_eq!(alexander_polynomial(&SeifertMatrix::unknot()), ints(&[1]));
}

#[test]
fn unit_roots() {
    let roots = alexander_unit_roots(&knot("trefoil_right"));
    let turns: Vec<_> = roots.iter().map(|r| r.turn_fraction().unwrap()).collect();
    assert_eq!(turns, vec![q(1, 6), q(5, 6)]);
    assert!(alexander_unit_roots(&SeifertMatrix::unknot()).is_empty());
    assert!(alexander_unit_roots(&knot("figure8")).is_empty());
    let two = connected_sum(&knot("trefoil_right"), &knot("trefoil_right"));
    let roots = alexander_unit_roots(&two);
    assert_eq!(roots.len(), 2);
    assert_eq!(cyclotomic_factors(&two).get(&6), Some(&2));
}

#[test]
fn non_cyclotomic_roots_are_isolated() {
    // Delta = 2t^2 - 3t + 2, unit roots with 2 cos(theta) = 3/2
    let v = SeifertMatrix::new(vec![vec![-1, 1], vec![0, -2]]).unwrap();
    assert_eq!(alexander_polynomial(&v), ints(&[2, -3, 2]));
    let roots = alexander_unit_roots(&v);
    assert_eq!(roots.len(), 2);
    for r in &roots {
        let UnitRoot::Isolated { s_lo, s_hi, .. } = r else {
            panic!("expected isolated root, got {r:?}");
        };
        let (lo, hi) = (
            crate::cyclo::parse_rational_literal(s_lo).unwrap(),
            crate::cyclo::parse_rational_literal(s_hi).unwrap(),
        );
        assert!(lo <= q(3, 2) && q(3, 2) <= hi);
    }
    assert_eq!(rho0(&v), Err(Error::NonCyclotomicJump));
}

#[test]
fn rho0_values() {
    assert_eq!(rho0(&knot("trefoil_right")).unwrap(), q(-4, 3));
    assert_eq!(rho0(&knot("trefoil_left")).unwrap(), q(4, 3));
    assert_eq!(rho0(&knot("figure8")).unwrap(), q(0, 1));
    assert_eq!(rho0(&SeifertMatrix::unknot()).unwrap(), q(0, 1));
    let mut v = SeifertMatrix::unknot();
    for c in 1..=4 {
        v = connected_sum(&v, &knot("trefoil_right"));
        assert_eq!(rho0(&v).unwrap(), q(-4 * c, 3), "{c} trefoils");
    }
    let t = knot("trefoil_right");
    assert_eq!(connected_sum(&t, &SeifertMatrix::unknot()), t);
    assert_eq!(rho0(&connected_sum(&t, &t.mirror())).unwrap(), q(0, 1));
}

#[test]
fn simplest_fractions() {
    assert_eq!(simplest_fraction_between(&q(0, 1), &q(1, 6)), (1, 7));
    assert_eq!(simplest_fraction_between(&q(1, 6), &q(5, 6)), (1, 2));
    assert_eq!(simplest_fraction_between(&q(1, 3), &q(1, 2)), (2, 5));
}

fn genus_one() -> impl Strategy<Value = SeifertMatrix> {
    (-3i64..=3, -3i64..=3, -3i64..=3)
        .prop_map(|(a, b, c)| SeifertMatrix::new(vec![vec![a, b], vec![b - 1, c]]).unwrap())
}

fn small_knot() -> impl Strategy<Value = SeifertMatrix> {
    prop::collection::vec(genus_one(), 0..=2).prop_map(|parts| {
        parts.iter().fold(SeifertMatrix::unknot(), |acc, v| connected_sum(&acc, v))
    })
}

fn root() -> impl Strategy<Value = CyclotomicNumber> {
    (2u64..=12).prop_flat_map(|m| (1..m as i64).prop_map(move |p| zeta(m, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugate_symmetry(v in small_knot(), w in root()) {
        prop_assert_eq!(lt_signature(&v, &w).unwrap(), lt_signature(&v, &w.conj()).unwrap());
    }

    #[test]
    fn even_off_the_roots(v in small_knot(), w in root()) {
        let delta = alexander_polynomial(&v);
        let mut value = CyclotomicNumber::zero(1);
        for (k, c) in delta.iter().enumerate() {
            let term = w.pow(k as i64).unwrap().scale(&BigRational::from_integer(c.clone()));
            value = &value + &term;
        }
        prop_assume!(!value.is_zero());
        prop_assert_eq!(lt_signature(&v, &w).unwrap() % 2, 0);
    }

    #[test]
    fn rho0_additive(a in small_knot(), b in small_knot()) {
        let (ra, rb) = (rho0(&a), rho0(&b));
        prop_assume!(ra.is_ok() && rb.is_ok());
        prop_assert_eq!(rho0(&connected_sum(&a, &b)).unwrap(), ra.unwrap() + rb.unwrap());
    }

    #[test]
    fn rho0_bounded_by_dim(v in small_knot()) {
        if let Ok(r) = rho0(&v) {
            prop_assert!(r.abs() <= BigRational::from_integer(v.dim().into()));
        }
    }

    #[test]
    fn piecewise_constant(v in small_knot()) {
        let Ok(arcs) = signature_arcs(&v) else { return Ok(()); };
        for arc in arcs {
            let width = &arc.end - &arc.start;
            for k in 1..=3i64 {
                let x = &arc.start + &width * q(k, 4);
                let w = CyclotomicNumber::root_of_unity(
                    x.denom().to_u64().unwrap(),
                    x.numer().to_i64().unwrap(),
                );
                prop_assert_eq!(lt_signature(&v, &w).unwrap(), arc.signature);
            }
        }
    }

    #[test]
    fn mirror_negates(v in small_knot()) {
        if let Ok(r) = rho0(&v) {
            prop_assert_eq!(rho0(&v.mirror()).unwrap(), -r);
        }
    }
}
