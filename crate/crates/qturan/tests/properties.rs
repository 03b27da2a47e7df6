//! Property tests over random families: structural invariants that must
//! hold for every input, not just the worked examples.

use num_bigint::BigUint;
use proptest::prelude::*;

use qturan::chains::{chain_profile, lubell, total_chain_weight};
use qturan::detect::contains_copy;
use qturan::hypercube::{factorial, parse_qfam, write_qfam, Dim, Family};
use qturan::Pattern;

fn family_strategy(max_n: u32) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(|n| {
        let size = 1usize << n;
        proptest::collection::vec(any::<bool>(), size).prop_map(move |bits| {
            let dim = Dim::new(n).unwrap();
            let masks = bits
                .iter()
                .enumerate()
                .filter_map(|(m, &b)| b.then_some(m as u32));
            Family::from_masks(dim, masks).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_involution_and_reverses_hist(f in family_strategy(7)) {
        let c = f.complement();
        prop_assert_eq!(c.complement(), f.clone());
        let n = f.dim().n() as usize;
        for i in 0..=n {
            prop_assert_eq!(c.level_hist()[i], f.level_hist()[n - i]);
        }
    }

    #[test]
    fn chain_identities(f in family_strategy(7)) {
        let n = f.dim().n();
        let stats = chain_profile(&f).unwrap();
        let mass = lubell(&f);
        prop_assert_eq!(stats.total(), factorial(n));
        prop_assert_eq!(&stats.member_chain_incidences(), mass.numerator());
        prop_assert_eq!(total_chain_weight(&f).unwrap(), factorial(n) * f.len());
    }

    #[test]
    fn qfam_round_trips(f in family_strategy(6)) {
        let text = write_qfam(&f);
        prop_assert_eq!(parse_qfam(&text).unwrap(), f);
    }

    #[test]
    fn detection_duality(f in family_strategy(5), spec in prop_oneof![
        Just("P:2"), Just("P:3"), Just("V:2"), Just("V:3"), Just("C4"),
    ]) {
        let p = Pattern::parse(spec).unwrap();
        let found = contains_copy(&f, &p).is_some();
        let dual = contains_copy(&f.complement(), &p.opposite()).is_some();
        prop_assert_eq!(found, dual);
    }

    #[test]
    fn lubell_of_complement_is_unchanged(f in family_strategy(7)) {
        prop_assert_eq!(
            lubell(&f).numerator().clone(),
            lubell(&f.complement()).numerator().clone()
        );
    }

    #[test]
    fn parsers_reject_garbage_without_panicking(s in "\\PC*") {
        let _ = parse_qfam(&s);
        let _ = Pattern::from_qpat(&s, "fuzz");
    }

    #[test]
    fn qfam_parser_survives_structured_noise(
        n in 1u32..10,
        lines in proptest::collection::vec("[0-9,# -]{0,12}", 0..8),
    ) {
        let text = format!("#qfam v1\nn={n}\n{}", lines.join("\n"));
        let _ = parse_qfam(&text);
    }
}

#[test]
fn lubell_of_full_lattice_is_n_plus_1() {
    for n in 1..=8u32 {
        let f = Family::full(Dim::new(n).unwrap());
        let l = lubell(&f);
        assert_eq!(l.numerator().clone(), factorial(n) * BigUint::from(n + 1));
    }
}
