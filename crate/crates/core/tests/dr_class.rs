use chowkit::dr_class::{
    compact_type_formula, dr_class, pullback_delta, pullback_theta, ClassFormat, DivisorSymbol, FormalClass,
    WeightVector,
};
use chowkit::exact_arith::frac;
use chowkit::Error;

fn wv(v: &[i64]) -> WeightVector {
    WeightVector::new(v.to_vec()).unwrap()
}

const SAMPLES: &[&[i64]] = &[&[1, -1], &[2, -2], &[3, -1, -2], &[1, 1, -2], &[0, 2, -2], &[1, -1, 2, -2], &[0, 0]];

#[test]
fn hain_restriction() {
    for g in 1..=3 {
        for w in SAMPLES {
            let d = wv(w);
            let full = dr_class(g, &d).unwrap();
            assert_eq!(full.specialize_compact_type(), compact_type_formula(g, &d).unwrap(), "g={g} d={w:?}");
        }
    }
}

#[test]
fn codimension_is_genus() {
    for g in 1..=3 {
        for w in SAMPLES {
            let c = dr_class(g, &wv(w)).unwrap();
            assert!(c.is_zero() || c.codim() == Some(g), "g={g} d={w:?}");
        }
    }
}

#[test]
fn zero_weights_leave_only_delta_irr() {
    let c = dr_class(2, &wv(&[0, 0])).unwrap();
    assert_eq!(c.serialize(ClassFormat::Text), "-1/240*delta_irr^2");
}

#[test]
fn delta_pullback_uses_absolute_weights() {
    let d = wv(&[2, -2]);
    let c = pullback_delta(1, &d);
    assert_eq!(c.coeff(&[(DivisorSymbol::Xi(1), 1)]), frac(2, 1));
    assert_eq!(c.coeff(&[(DivisorSymbol::Xi(2), 1)]), frac(2, 1));
}

#[test]
fn theta_coefficients_on_three_points() {
    let t = pullback_theta(2, &wv(&[2, -1, -1])).unwrap();
    assert_eq!(t.coeff(&[(DivisorSymbol::K(1), 1)]), frac(2, 1));
    // d_{23} = -2, d_2^2 + d_3^2 = 2
    let d23 = DivisorSymbol::delta(2, 3, 0, &[2, 3]).unwrap();
    assert_eq!(t.coeff(&[(d23, 1)]), frac(-1, 1));
    // delta_1^{1} = delta_1^{2,3}, d^2 = 4
    let d1 = DivisorSymbol::delta(2, 3, 1, &[2, 3]).unwrap();
    assert_eq!(d1, DivisorSymbol::Delta { h: 1, set: vec![1] });
    assert_eq!(t.coeff(&[(d1, 1)]), frac(-2, 1));
}

#[test]
fn json_round_trip() {
    for g in 1..=3 {
        let c = dr_class(g, &wv(&[3, -1, -2])).unwrap();
        let text = c.serialize(ClassFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["codim"], g);
        assert_eq!(FormalClass::from_json(&value).unwrap(), c);
    }
}

#[test]
fn rejects_bad_input() {
    assert_eq!(WeightVector::new(vec![1, 1]).unwrap_err(), Error::WeightSum(2));
    assert!(dr_class(0, &wv(&[1, -1])).is_err());
    let bad = serde_json::json!({ "g": 1, "n": 2, "weights": [1, -1], "terms": [
        { "coeff": "1", "symbols": [{ "kind": "K", "i": 7, "power": 1 }] }
    ]});
    assert!(FormalClass::from_json(&bad).is_err());
}
