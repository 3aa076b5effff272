use defectfield::coeff::Coeff;
use defectfield::defect_force::*;
use defectfield::elasticity::IsotropicModuli;
use defectfield::field_algebra::{Codomain, PointPart, Series, SingularField};
use defectfield::testfn_quadrature::QuadratureSpec;

const R: f64 = 1.0;

fn moduli() -> IsotropicModuli {
    IsotropicModuli::new(1.0, 0.25).unwrap()
}

fn poly_stress(s11: Series, s12: Series, s22: Series) -> SingularField {
    SingularField::from_components(Codomain::SymTensor, R, vec![s11, s12.clone(), s12, s22], PointPart::new(4)).unwrap()
}

fn constant(c: f64) -> Series {
    Series::constant(Coeff::from_f64(c).unwrap())
}

fn shear() -> SingularField {
    poly_stress(Series::zero(), constant(1.0), Series::zero())
}

fn uniform() -> SingularField {
    poly_stress(constant(0.75), constant(-0.5), constant(2.0))
}

/// `[[x₂, 0], [0, x₁]]`.
fn linear() -> SingularField {
    poly_stress(Series::x2(), Series::zero(), Series::x1())
}

/// Airy stress of `x₁³x₂ − x₁x₂³`.
fn airy_quadratic() -> SingularField {
    let m = |a, b, c: i64| Series::monomial_xy(a, b).scale(&Coeff::from_int(c));
    poly_stress(m(1, 1, -6), m(2, 0, -3).add(&m(0, 2, 3)), m(1, 1, 6))
}

/// `[[0, 0], [0, x₁]]`, so `tr σ₂ = x₁`.
fn trace_x1() -> SingularField {
    poly_stress(Series::zero(), Series::zero(), Series::x1())
}

fn close(a: [f64; 2], b: [f64; 2], rel: f64) -> bool {
    let scale = 1.0 + b[0].abs().max(b[1].abs());
    (a[0] - b[0]).abs() <= rel * scale && (a[1] - b[1]).abs() <= rel * scale
}

fn loop_force(a: &SingularField, sigma2: &SingularField) -> [f64; 2] {
    let m = moduli();
    let (beta1, sigma1) = defect_fields(a, &m).unwrap();
    assert_eq!(beta1.dislocation_density().unwrap(), *a);
    let beta2 = smooth_fields(sigma2, &m).unwrap();
    assert!(beta2.dislocation_density().unwrap().is_zero());
    let j = interaction_eshelby(&beta1, &sigma1, &beta2, sigma2, &m).unwrap();
    let from_div = force_from_eshelby(&j).unwrap();
    let (v, _) = force_loop_oracle(&j, &QuadratureSpec::default()).unwrap();
    assert!(close(v, from_div.force(), 1e-9), "{v:?} vs Div J {:?}", from_div.force());
    v
}

#[test]
fn peach_koehler_closed_form() {
    assert_eq!(peach_koehler([0.0, 0.0], [[1.0, 2.0], [2.0, 3.0]]), [0.0, 0.0]);
    assert_eq!(peach_koehler([1.0, 0.0], [[0.0, 1.0], [1.0, 0.0]]), [-1.0, 0.0]);
}

#[test]
fn generalized_force_of_a_dislocation() {
    let a = dislocation_density([1.0, 0.0], R).unwrap();
    let f = generalized_force(&a, &shear()).unwrap();
    assert_eq!(f.force(), [-1.0, 0.0]);
    assert_eq!(f.order(), Some(0));
    let b = [0.3, -1.25];
    let s = uniform();
    let f = generalized_force(&dislocation_density(b, R).unwrap(), &s).unwrap();
    assert!(close(f.force(), peach_koehler(b, [[0.75, -0.5], [-0.5, 2.0]]), 1e-15));
    let zero = generalized_force(&SingularField::zero(Codomain::Vector, R), &s).unwrap();
    assert!(zero.entries.is_empty());
}

#[test]
fn generalized_force_rejects_singular_stress() {
    let s = defectfield::elasticity::kelvin_stress(&moduli(), R).unwrap();
    let a = dislocation_density([1.0, 0.0], R).unwrap();
    assert!(matches!(generalized_force(&a, &s), Err(defectfield::MechanicsError::SingularAtOrigin(_))));
}

#[test]
fn eshelby_symmetric_pairings_coincide() {
    let m = moduli();
    let a = dislocation_density([1.0, 0.5], R).unwrap();
    let (beta1, sigma1) = defect_fields(&a, &m).unwrap();
    let sigma2 = linear();
    let beta2 = smooth_fields(&sigma2, &m).unwrap();
    let j = interaction_eshelby(&beta1, &sigma1, &beta2, &sigma2, &m).unwrap();
    // ⟨ℂβ₁, β₂⟩ = ⟨σ₁, E₂⟩ = ⟨ℂβ₂, β₁⟩ = ⟨σ₂, E₁⟩
    let dd = |x: &SingularField, y: &SingularField| defectfield::field_algebra::double_dot(&x.as_tensor(), &y.as_tensor()).unwrap();
    assert_eq!(dd(&sigma1, &beta2.strain), dd(&sigma2, &beta1.strain));
    assert!(!j.is_zero());

    let zero = Distortion::symmetric(SingularField::zero(Codomain::SymTensor, R)).unwrap();
    let zs = SingularField::zero(Codomain::SymTensor, R);
    let j0 = interaction_eshelby(&zero, &zs, &beta2, &sigma2, &m).unwrap();
    assert!(j0.is_zero());
    assert!(force_loop_oracle(&j0, &QuadratureSpec::default()).unwrap().0 == [0.0, 0.0]);
}

#[test]
fn eshelby_rejects_singular_partner() {
    let m = moduli();
    let (beta1, sigma1) = defect_fields(&dislocation_density([1.0, 0.0], R).unwrap(), &m).unwrap();
    assert!(matches!(
        interaction_eshelby(&beta1, &sigma1, &beta1, &sigma1, &m),
        Err(defectfield::MechanicsError::OverlappingSupports)
    ));
}

#[test]
fn loop_reproduces_peach_koehler() {
    let b = [1.0, 0.0];
    let v = loop_force(&dislocation_density(b, R).unwrap(), &shear());
    assert!(close(v, peach_koehler(b, [[0.0, 1.0], [1.0, 0.0]]), 1e-6), "{v:?}");
    let b = [0.5, -0.75];
    let v = loop_force(&dislocation_density(b, R).unwrap(), &uniform());
    assert!(close(v, peach_koehler(b, [[0.75, -0.5], [-0.5, 2.0]]), 1e-6), "{v:?}");
}

#[test]
fn loop_reproduces_dipole_force() {
    for sigma2 in [linear(), airy_quadratic()] {
        let (b, v) = ([1.0, -0.5], [0.25, 1.0]);
        let closed = dipole_force_couple(b, v, &sigma2).unwrap();
        let a = dipole_density(b, v, R).unwrap();
        let gf = generalized_force(&a, &sigma2).unwrap();
        assert!(close(gf.force(), closed.force, 1e-15));
        let lv = loop_force(&a, &sigma2);
        assert!(close(lv, closed.force, 1e-6), "{lv:?} vs {:?}", closed.force);
    }
}

#[test]
fn uniform_field_dipole_has_couple_only() {
    let d = dipole_force_couple([1.0, 0.0], [0.0, 1.0], &uniform()).unwrap();
    assert_eq!(d.force, [0.0, 0.0]);
    assert!(!d.couple.is_empty());
    let z = dipole_force_couple([0.0, 0.0], [0.0, 1.0], &linear()).unwrap();
    assert_eq!(z.force, [0.0, 0.0]);
    assert!(z.couple.is_empty());
}

#[test]
fn finite_separation_dipole_converges() {
    for sigma2 in [linear(), airy_quadratic()] {
        let (errs, order) = dipole_convergence([1.0, 0.5], [0.6, 0.8], &sigma2).unwrap();
        assert!(order >= 1.0 - 1e-9, "order {order}: {errs:?}");
    }
}

#[test]
fn dilation_force_closed_form() {
    let u = dilation_force(2.0, &uniform()).unwrap();
    assert_eq!(u.force, [0.0, 0.0]);
    assert!(!u.couple.is_empty());
    let f = dilation_force(1.5, &trace_x1()).unwrap();
    assert_eq!(f.force, [1.5, 0.0]);
}

// The density form gives `F^{I,(0,0)} = −(a/2)∇(tr σ₂)(O)`, not the closed form
// `a∇(tr σ₂)(O)`; the loop oracle sides with the density form.
#[test]
fn dilation_density_form_gives_minus_half_trace_gradient() {
    let a = 1.5;
    for sigma2 in [trace_x1(), linear()] {
        let gf = generalized_force(&dilation_density(a, R).unwrap(), &sigma2).unwrap();
        let closed = dilation_force(a, &sigma2).unwrap();
        let expected = [-0.5 * closed.force[0], -0.5 * closed.force[1]];
        assert!(close(gf.force(), expected, 1e-14), "{:?}", gf.force());
    }
}

#[test]
fn loop_agrees_with_dilation_density_form() {
    let a = 1.5;
    for sigma2 in [trace_x1(), linear()] {
        let density = dilation_density(a, R).unwrap();
        let lv = loop_force(&density, &sigma2);
        let gf = generalized_force(&density, &sigma2).unwrap();
        assert!(close(lv, gf.force(), 1e-6), "{lv:?} vs {:?}", gf.force());
    }
}

#[test]
fn force_is_bilinear() {
    let a1 = dislocation_density([1.0, 0.0], R).unwrap();
    let a2 = dipole_density([0.0, 1.0], [1.0, 1.0], R).unwrap();
    let s1 = linear();
    let s2 = airy_quadratic();
    let f = |a: &SingularField, s: &SingularField| generalized_force(a, s).unwrap().entries;
    let sum_a = a1.add(&a2).unwrap();
    assert_eq!(f(&sum_a, &s1), f(&a1, &s1).add(&f(&a2, &s1)));
    let sum_s = s1.add(&s2).unwrap();
    assert_eq!(f(&a2, &sum_s), f(&a2, &s1).add(&f(&a2, &s2)));
    assert!(f(&a2, &s1).order().unwrap() <= 1);
    assert!(f(&a2, &s2).is_empty());
}
