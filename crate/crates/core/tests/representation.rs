use sweil_core::fieldops::{build_n2_family, build_s2alpha_family, FieldOperator, N2Realization};
use sweil_core::fock::{enumerate_box, FockBox};
use sweil_core::report::{emit_report, Format, SuiteResult};
use sweil_core::sca::{n2_bracket, SCAElement, Symbol};
use sweil_core::verify::{
    check_representation, commutator_on, extract_central_charge, s2alpha_table, RepresentationCheck, SweepContext,
};
use sweil_core::{Error, FockMonomial, FockVector, Result, Scalar};

const N2: [Symbol; 4] = [Symbol::Lalpha, Symbol::H, Symbol::Hf, Symbol::P];

fn fmu(l: Scalar, m: Scalar) -> N2Realization {
    N2Realization::Fmu { lambda: l, mu: m }
}

fn charge(real: &N2Realization) -> Scalar {
    let h = |n| build_n2_family(real, Symbol::H, n);
    extract_central_charge(&h, &FockMonomial::vacuum()).unwrap()
}

#[test]
fn central_charges() {
    assert_eq!(charge(&fmu(Scalar::zero(), Scalar::zero())), Scalar::from_i64(3));
    assert_eq!(charge(&fmu(-Scalar::one(), Scalar::one())), Scalar::from_i64(9));
    assert_eq!(charge(&fmu(Scalar::frac(1, 2), Scalar::zero())), Scalar::zero());
    assert_eq!(charge(&N2Realization::Loop { dim: 1 }), Scalar::from_i64(3));
    assert_eq!(charge(&N2Realization::Loop { dim: 3 }), Scalar::from_i64(9));
    // 3 − 6λ away from the fixtures
    assert_eq!(charge(&fmu(Scalar::frac(-1, 3), Scalar::frac(2, 5))), Scalar::from_i64(5));
}

#[test]
fn inconsistent_fits_are_reported() {
    let real = fmu(Scalar::zero(), Scalar::zero());
    let skewed = |n: i64| Ok(build_n2_family(&real, Symbol::H, n)?.scaled(&Scalar::from_i64(n)));
    assert!(matches!(extract_central_charge(&skewed, &FockMonomial::vacuum()), Err(Error::Structural(_))));
}

fn n2_check(
    real: &N2Realization,
    states: &[FockMonomial],
    table: &(dyn Fn(&SCAElement, &SCAElement) -> Result<SCAElement> + Sync),
    builder: &(dyn Fn(Symbol, i64) -> Result<FieldOperator> + Sync),
) -> sweil_core::verify::RelationReport {
    let spec = RepresentationCheck {
        check: "n2".into(),
        symbols: N2.to_vec(),
        window: 1,
        table,
        builder,
        central_value: real.central_charge(),
    };
    check_representation(&spec, states, &SweepContext::new("small")).unwrap()
}

fn small_states() -> Vec<FockMonomial> {
    enumerate_box(1, &FockBox::absolute(2, 1)).unwrap()
}

#[test]
fn n2_and_s2alpha_pass_on_small_boxes() {
    let real = fmu(-Scalar::one(), Scalar::one());
    let table = |a: &SCAElement, b: &SCAElement| n2_bracket(a, b);
    let builder = |s, n| build_n2_family(&real, s, n);
    assert!(n2_check(&real, &small_states(), &table, &builder).passed());

    for alpha in [Scalar::zero(), Scalar::frac(1, 2), Scalar::one()] {
        let a2 = alpha.clone();
        let builder = move |s, n| build_s2alpha_family(1, &a2, s, n);
        let table = s2alpha_table(alpha);
        let spec = RepresentationCheck {
            check: "s2".into(),
            symbols: Symbol::ALL.to_vec(),
            window: 1,
            table: &table,
            builder: &builder,
            central_value: Scalar::from_i64(3),
        };
        assert!(check_representation(&spec, &small_states(), &SweepContext::new("small")).unwrap().passed());
    }
}

fn parse_key(s: &str) -> (Symbol, i64) {
    let (sym, rest) = s.split_once('[').unwrap();
    (sym.parse().unwrap(), rest.trim_end_matches(']').parse().unwrap())
}

/// Re-evaluates `[θa, θb]v − θ([a,b])v − c(a,b)v` on the witness monomial.
fn replay(
    w: &sweil_core::verify::Witness,
    central: &Scalar,
    table: &(dyn Fn(&SCAElement, &SCAElement) -> Result<SCAElement> + Sync),
    builder: &(dyn Fn(Symbol, i64) -> Result<FieldOperator> + Sync),
) -> FockVector {
    let inner = w.relation.strip_prefix('[').unwrap().strip_suffix(']').unwrap();
    let (l, r) = inner.split_once(", ").unwrap();
    let (a, b) = (parse_key(l), parse_key(r));
    let v = FockVector::basis(w.monomial.parse().unwrap());
    let (x, y) = (builder(a.0, a.1).unwrap(), builder(b.0, b.1).unwrap());
    let mut d = commutator_on(&x, &y, &v);
    let br = table(&SCAElement::basis(a.0, a.1), &SCAElement::basis(b.0, b.1)).unwrap();
    for (s, n, c) in br.terms() {
        d.add_scaled(&builder(s, n).unwrap().apply(&v), &-c.clone());
    }
    d.add_scaled(&v, &-(br.central() * central));
    d
}

fn replays(
    w: &sweil_core::verify::Witness,
    central: &Scalar,
    table: &(dyn Fn(&SCAElement, &SCAElement) -> Result<SCAElement> + Sync),
    builder: &(dyn Fn(Symbol, i64) -> Result<FieldOperator> + Sync),
) -> bool {
    w.lhs != w.rhs && !replay(w, central, table, builder).is_zero()
}

#[test]
fn every_coefficient_mutation_is_detected() {
    let real = fmu(-Scalar::one(), Scalar::one());
    let states = small_states();
    let table = |a: &SCAElement, b: &SCAElement| n2_bracket(a, b);
    let mut mutants = 0;
    for s in N2 {
        for n in -1..=1 {
            let terms = build_n2_family(&real, s, n).unwrap().terms().len();
            for t in 0..terms {
                let builder = |x: Symbol, k: i64| {
                    let op = build_n2_family(&real, x, k)?;
                    Ok(if (x, k) == (s, n) { op.with_perturbed_term(t, Scalar::one()) } else { op })
                };
                let r = n2_check(&real, &states, &table, &builder);
                assert!(!r.passed(), "mutating term {t} of {s}[{n}] went unnoticed");
                assert!(replays(r.witness.as_ref().unwrap(), &real.central_charge(), &table, &builder));
                mutants += 1;
            }
        }
    }
    assert!(mutants > 12);
}

#[test]
fn every_structure_constant_mutation_is_detected() {
    let real = fmu(-Scalar::one(), Scalar::one());
    let states = small_states();
    let builder = |s, n| build_n2_family(&real, s, n);
    let basis: Vec<(Symbol, i64)> = N2.iter().flat_map(|&s| (-1..=1).map(move |n| (s, n))).collect();
    for (i, &a) in basis.iter().enumerate() {
        for &b in &basis[i..] {
            let exact = n2_bracket(&SCAElement::basis(a.0, a.1), &SCAElement::basis(b.0, b.1)).unwrap();
            let mut slots: Vec<Option<(Symbol, i64)>> = exact.terms().map(|(s, n, _)| Some((s, n))).collect();
            if !exact.central().is_zero() {
                slots.push(None);
            }
            for slot in slots {
                let table = |x: &SCAElement, y: &SCAElement| {
                    let r = n2_bracket(x, y)?;
                    if *x != SCAElement::basis(a.0, a.1) || *y != SCAElement::basis(b.0, b.1) {
                        return Ok(r);
                    }
                    Ok(match slot {
                        Some((s, n)) => r.add(&SCAElement::basis(s, n)),
                        None => r.add(&SCAElement::central_only(Scalar::one())),
                    })
                };
                let rep = n2_check(&real, &states, &table, &builder);
                assert!(!rep.passed(), "mutating {slot:?} in [{a:?}, {b:?}] went unnoticed");
            }
        }
    }
}

#[test]
fn failing_report_carries_a_parseable_witness() {
    let real = fmu(Scalar::zero(), Scalar::zero());
    let table = |a: &SCAElement, b: &SCAElement| n2_bracket(a, b);
    let builder = |s: Symbol, n: i64| {
        let op = build_n2_family(&real, s, n)?;
        Ok(if (s, n) == (Symbol::H, 1) { op.scaled(&Scalar::from_i64(2)) } else { op })
    };
    let rep = n2_check(&real, &small_states(), &table, &builder);
    let w = rep.witness.clone().expect("witness");
    assert!(w.relation.contains("H[1]"), "{}", w.relation);
    assert!(replays(&w, &real.central_charge(), &table, &builder));
    // the unmutated operators satisfy the same relation on the same state
    let exact = |s, n| build_n2_family(&real, s, n);
    assert!(replay(&w, &real.central_charge(), &table, &exact).is_zero());
    let result = SuiteResult { mode: "verify-n2".into(), reports: vec![rep], ..Default::default() };
    let json = emit_report(&result, Format::Json).unwrap();
    assert!(json.contains(&serde_json::to_string(&w.monomial).unwrap()));
    assert!(!result.passed());
}
