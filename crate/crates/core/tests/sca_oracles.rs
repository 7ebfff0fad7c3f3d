use proptest::prelude::*;
use sweil_core::sca::{
    bracket, derivation_sweep, kahler_bracket, n2_bracket, psi, spectral_flow, vf_bracket, vf_realize, KSymbol,
    SCAElement, Sl2Symbol, Symbol,
};
use sweil_core::Scalar;

fn sym() -> impl Strategy<Value = Symbol> {
    prop::sample::select(Symbol::ALL.to_vec())
}

fn n2_sym() -> impl Strategy<Value = Symbol> {
    prop::sample::select(vec![Symbol::Lalpha, Symbol::H, Symbol::Hf, Symbol::P])
}

fn alpha_vf() -> impl Strategy<Value = Scalar> {
    prop::sample::select(vec![Scalar::zero(), Scalar::frac(1, 2)])
}

fn sign(a: Symbol, b: Symbol) -> Scalar {
    if a.is_odd() && b.is_odd() {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn table_matches_vector_fields(a in alpha_vf(), s in sym(), n in -3i64..=3, t in sym(), k in -3i64..=3) {
        let x = vf_realize(&a, &SCAElement::basis(s, n));
        let y = vf_realize(&a, &SCAElement::basis(t, k));
        let table = bracket(&a, &SCAElement::basis(s, n), &SCAElement::basis(t, k));
        prop_assert_eq!(vf_bracket(&x, &y).unwrap(), vf_realize(&a, &table));
    }

    #[test]
    fn super_antisymmetry(a in alpha_vf(), s in sym(), n in -3i64..=3, t in sym(), k in -3i64..=3) {
        let (x, y) = (SCAElement::basis(s, n), SCAElement::basis(t, k));
        let mut r = bracket(&a, &x, &y);
        r.add_scaled(&bracket(&a, &y, &x), &sign(s, t));
        prop_assert!(r.is_zero());
    }

    #[test]
    fn super_jacobi_with_cocycle(
        a in alpha_vf(),
        (s, n) in (sym(), -3i64..=3),
        (t, k) in (sym(), -3i64..=3),
        (u, m) in (sym(), -3i64..=3),
    ) {
        let (x, y, z) = (SCAElement::basis(s, n), SCAElement::basis(t, k), SCAElement::basis(u, m));
        let mut j = bracket(&a, &x, &bracket(&a, &y, &z)).scaled(&sign(s, u));
        j.add_scaled(&bracket(&a, &y, &bracket(&a, &z, &x)), &sign(t, s));
        j.add_scaled(&bracket(&a, &z, &bracket(&a, &x, &y)), &sign(u, t));
        prop_assert!(j.is_zero(), "{}", j);
    }

    #[test]
    fn spectral_flow_is_a_homomorphism(
        a in prop::sample::select(vec![Scalar::frac(1, 2), Scalar::one()]),
        (s, n) in (n2_sym(), -3i64..=3),
        (t, k) in (n2_sym(), -3i64..=3),
    ) {
        let (x, y) = (SCAElement::basis(s, n), SCAElement::basis(t, k));
        let lhs = spectral_flow(&a, &bracket(&a, &x, &y)).unwrap();
        let rhs = n2_bracket(&spectral_flow(&a, &x).unwrap(), &spectral_flow(&a, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn exterior_derivations_at_integral_alpha() {
    for a in [-1, 0, 1] {
        for d in Sl2Symbol::ALL {
            assert_eq!(derivation_sweep(&Scalar::from_i64(a), d, 3).unwrap(), None, "{d} at α={a}");
        }
    }
    assert_eq!(derivation_sweep(&Scalar::frac(1, 2), Sl2Symbol::HH, 3).unwrap(), None);
}

/// ψ intertwines the Kähler brackets with S′(2,0) up to central terms; the
/// only central term is on [L, Λ].
#[test]
fn psi_intertwines_up_to_center() {
    let z = Scalar::zero();
    for a in KSymbol::ALL {
        for b in KSymbol::ALL {
            let got = bracket(&z, &psi(a), &psi(b));
            let mut want = SCAElement::zero();
            for (k, c) in kahler_bracket(a, b) {
                want.add_scaled(&psi(k), &c);
            }
            assert_eq!(got.centerless(), want.centerless(), "[{a}, {b}]");
            let central = match (a, b) {
                (KSymbol::L, KSymbol::Lam) => -Scalar::frac(1, 6),
                (KSymbol::Lam, KSymbol::L) => Scalar::frac(1, 6),
                _ => Scalar::zero(),
            };
            assert_eq!(got.central(), &central, "[{a}, {b}] central part");
        }
    }
}

#[test]
fn n2_virasoro_central_term() {
    // [L_m, L_{-m}] = 2m L_0 + 𝒞/12 (m³ − m)
    for m in 1..=4 {
        let r = n2_bracket(&SCAElement::basis(Symbol::Lalpha, m), &SCAElement::basis(Symbol::Lalpha, -m)).unwrap();
        assert_eq!(r.central(), &Scalar::frac(m * m * m - m, 12));
    }
}
