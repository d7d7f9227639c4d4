use monpres::classgroup::{class_group, ClassGroupError, ClassGroupParameters};
use monpres::criteria::canonicalize_two_relator;
use monpres::criteria::{is_normal, NormalityStatus};
use monpres::divisors::{principal_decomposition_two_relator, PrimeLabel};
use monpres::presentation::{normalize, parse_presentation, PresentationError, TrailStep};
use monpres::sweep::{check_presentation, CheckOptions};

#[test]
fn normal_two_relation_example_end_to_end() {
    let p = parse_presentation(
        "gens: u1 u2 u3 u4 u5\n\
         rel: u1 u2 = u3^2\n\
         rel: u1 u3 = u4 u5\n",
    )
    .unwrap();
    assert_eq!(is_normal(&p).status, NormalityStatus::NormalPositive);
    let r = class_group(&p).unwrap();
    assert_eq!(r.formula.to_string(), "Z x Z/2");
    match r.parameters {
        ClassGroupParameters::Two {
            f, d1, d2, prime_count, ..
        } => {
            assert_eq!((f, d1, d2, prime_count), (1, 2, 1, 4));
        }
        other => panic!("unexpected parameters {other:?}"),
    }
    let c = canonicalize_two_relator(&p).unwrap();
    let u4 = principal_decomposition_two_relator(&c, 3).unwrap();
    assert_eq!(u4.multiplicity(&PrimeLabel::Triple(0, 1, 3)), 3);
    assert_eq!(u4.to_string(), "P(1,2,4)^3 * P(3,2,4)");
    assert!(check_presentation(&p, &CheckOptions::default()).agree());
}

#[test]
fn not_normal_example_is_refused_by_every_route() {
    let p = parse_presentation("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2").unwrap();
    assert!(matches!(
        class_group(&p),
        Err(ClassGroupError::NotNormalInput(NormalityStatus::NotNormal))
    ));
    let c = check_presentation(&p, &CheckOptions::default());
    assert_eq!(c.oracle_normal, Some(false));
    assert!(c.agree());
}

#[test]
fn normalization_is_recorded() {
    let p = parse_presentation("x y z w | x = y z ; y^2 = z w").unwrap();
    let n = normalize(&p).unwrap();
    assert_eq!(n.presentation.generator_count(), 3);
    assert!(n.trail.steps.iter().any(|s| matches!(s, TrailStep::Eliminated { .. })));
    assert!(!n.trail.conditional);
    assert_eq!(is_normal(&p).status, NormalityStatus::NormalPositive);
    assert_eq!(class_group(&p).unwrap().formula.to_string(), "Z/2");
}

#[test]
fn parse_errors_carry_positions() {
    match parse_presentation("gens: a b\nrel: a = c\n") {
        Err(PresentationError::UnknownGenerator { name, .. }) => assert_eq!(name, "c"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_presentation("a b | a^0 = b"),
        Err(PresentationError::ZeroExponent { .. })
    ));
}

#[test]
fn three_relations_are_not_supported() {
    let p = parse_presentation("a b c d e f | a b = c^2 ; c d = e^2 ; a e = f^3").unwrap();
    assert!(matches!(
        normalize(&p),
        Err(PresentationError::NotSupported { count: 3 })
    ));
    assert_eq!(is_normal(&p).status, NormalityStatus::NotApplicable);
}
