use defectfield::coeff::Coeff;
use defectfield::field_algebra::{
    amap, curl_curl, div, partial_derivative, symmetrize, Codomain, Component, MultiIndex, Parity, PointPart, Series,
    SingularField, SmoothTerm,
};
use proptest::prelude::*;

const R: f64 = 1.0;

fn poly_entry() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    prop::collection::vec((0u32..=4, 0u32..=4, -5i64..=5), 0..5)
        .prop_map(|v| v.into_iter().filter(|(a, b, _)| a + b <= 4).collect())
}

fn series(terms: &[(u32, u32, i64)]) -> Series {
    terms
        .iter()
        .fold(Series::zero(), |s, &(a, b, c)| s.add(&Series::monomial_xy(a, b).scale(&Coeff::from_int(c))))
}

fn poly_sym_tensor() -> impl Strategy<Value = SingularField> {
    (poly_entry(), poly_entry(), poly_entry()).prop_map(|(a, b, c)| {
        let off = series(&b);
        SingularField::from_components(Codomain::SymTensor, R, vec![series(&a), off.clone(), off, series(&c)], PointPart::new(4))
            .unwrap()
    })
}

fn singular_tensor() -> impl Strategy<Value = SingularField> {
    let term = (-3i32..=2, 0u8..=1, 0u32..=3, any::<bool>(), 0usize..4, -4i64..=4);
    prop::collection::vec(term, 1..5).prop_map(|ts| {
        let terms: Vec<SmoothTerm> = ts
            .into_iter()
            .map(|(k, p, n, sin, slot, c)| {
                let parity = if sin && n > 0 { Parity::Sin } else { Parity::Cos };
                SmoothTerm::new(c as f64 * 0.5, k, p, n, parity, Component::CartPair(slot / 2, slot % 2))
            })
            .collect();
        SingularField::from_terms(Codomain::Tensor, R, &terms).unwrap()
    })
}

fn point_part(width: usize) -> impl Strategy<Value = PointPart> {
    prop::collection::vec((0u32..=2, 0u32..=2, 0..width, -3i64..=3), 0..4).prop_map(move |es| {
        let mut p = PointPart::new(width);
        for (a, b, c, v) in es {
            p.add_component(MultiIndex(a, b), c, &Coeff::from_int(v));
        }
        p
    })
}

fn div_div(t: &SingularField) -> SingularField {
    div(&div(t).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curl_curl_is_div_div_of_amap_on_polynomials(t in poly_sym_tensor()) {
        prop_assert_eq!(curl_curl(&t).unwrap(), div_div(&amap(&t).unwrap()));
    }

    #[test]
    fn curl_curl_is_div_div_of_amap_on_singular_fields(t in singular_tensor(), p in point_part(4)) {
        let t = t.with_point(p).unwrap();
        prop_assert_eq!(curl_curl(&t).unwrap(), div_div(&amap(&t).unwrap()));
    }

    #[test]
    fn derivatives_commute(t in singular_tensor()) {
        let c = t.component(1);
        let a = partial_derivative(&partial_derivative(&c, 1).unwrap(), 2).unwrap();
        let b = partial_derivative(&partial_derivative(&c, 2).unwrap(), 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn div_is_linear(s in singular_tensor(), t in singular_tensor(), c in -3i64..=3) {
        let k = Coeff::from_int(c);
        let lhs = div(&s.scale(&k).add(&t).unwrap()).unwrap();
        let rhs = div(&s).unwrap().scale(&k).add(&div(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn curl_curl_is_linear(s in poly_sym_tensor(), t in singular_tensor(), c in -3i64..=3) {
        let k = Coeff::from_int(c);
        let t = symmetrize(&t).unwrap();
        let lhs = curl_curl(&s.scale(&k).add(&t).unwrap()).unwrap();
        let rhs = curl_curl(&s).unwrap().scale(&k).add(&curl_curl(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
