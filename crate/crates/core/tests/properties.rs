use std::sync::{Arc, OnceLock};

use bsym_core::code::{b_weight, codeword, CodeParams};
use bsym_core::field::{FieldElement, Subfield, Tower, TraceMap};
use bsym_core::theorems::{Decomposition, W1Source};
use proptest::prelude::*;

fn tower_9_4() -> &'static Arc<Tower> {
    static T: OnceLock<Arc<Tower>> = OnceLock::new();
    T.get_or_init(|| Arc::new(Tower::build(3, 2, 4, None).unwrap()))
}

fn code_5_4() -> &'static CodeParams {
    static C: OnceLock<CodeParams> = OnceLock::new();
    C.get_or_init(|| CodeParams::new(Arc::new(Tower::build(5, 1, 4, None).unwrap()), 2).unwrap())
}

fn elem(t: &Tower) -> impl Strategy<Value = FieldElement> + '_ {
    (0..t.order() as u32).prop_map(move |i| t.from_index(i).unwrap())
}

fn nonzero(t: &Tower) -> impl Strategy<Value = FieldElement> + '_ {
    (1..t.order() as u32).prop_map(move |i| t.from_index(i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ring_axioms(x in elem(tower_9_4()), y in elem(tower_9_4()), z in elem(tower_9_4())) {
        let t = tower_9_4();
        prop_assert_eq!(t.add(x, y), t.add(y, x));
        prop_assert_eq!(t.mul(x, y), t.mul(y, x));
        prop_assert_eq!(t.mul(t.mul(x, y), z), t.mul(x, t.mul(y, z)));
        prop_assert_eq!(t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z)));
        prop_assert_eq!(t.sub(t.add(x, y), y), x);
        prop_assert_eq!(t.mul(x, y), t.mul_reference(x, y));
    }

    #[test]
    fn inverses_and_order(x in nonzero(tower_9_4())) {
        let t = tower_9_4();
        prop_assert_eq!(t.mul(x, t.inv(x).unwrap()), FieldElement::ONE);
        prop_assert_eq!(t.pow(x, t.order()), x);
        prop_assert_eq!(t.is_primitive(x), t.is_primitive_reference(x));
    }

    #[test]
    fn trace_is_fq_linear(x in elem(tower_9_4()), y in elem(tower_9_4()), k in 0usize..9) {
        let t = tower_9_4();
        let c = t.subfield_elements(Subfield::Q)[k];
        let lhs = t.trace_to_q(t.add(t.mul(c, x), y));
        let rhs = t.add(t.mul(c, t.trace_to_q(x)), t.trace_to_q(y));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(t.trace_to_q(x), t.trace(x, TraceMap::ToQ).unwrap());
        prop_assert!(t.in_subfield(t.trace_to_q(x), Subfield::Q));
    }

    #[test]
    fn trace_transitivity(x in elem(tower_9_4())) {
        let t = tower_9_4();
        let via_q = t.trace(t.trace_to_q(x), TraceMap::QToP).unwrap();
        prop_assert_eq!(via_q, t.trace(x, TraceMap::ToP).unwrap());
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(x in elem(tower_9_4()), y in elem(tower_9_4()), i in 0u32..8) {
        let t = tower_9_4();
        prop_assert_eq!(t.frobenius(t.add(x, y), i), t.add(t.frobenius(x, i), t.frobenius(y, i)));
        prop_assert_eq!(t.frobenius(t.mul(x, y), i), t.mul(t.frobenius(x, i), t.frobenius(y, i)));
    }

    #[test]
    fn shift_by_eta_n_rotates_codeword(a in nonzero(code_5_4().tower())) {
        let pr = code_5_4();
        let t = pr.tower();
        let c = codeword(pr, a).entries;
        let shifted = codeword(pr, t.mul(a, pr.eta_n())).entries;
        let mut rotated = c.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(shifted, rotated);
    }

    #[test]
    fn weight_kernel_matches_materialised_word(a in elem(code_5_4().tower()), b in 1usize..8) {
        let pr = code_5_4();
        let c = codeword(pr, a).entries;
        prop_assert_eq!(pr.codeword_b_weight(a, b), b_weight(&c, b).unwrap());
    }

    #[test]
    fn decomposition_sources_agree(a in nonzero(code_5_4().tower()), b in 2usize..=4) {
        let pr = code_5_4();
        let d = Decomposition::new(pr, b).unwrap();
        let direct = d.check(a, W1Source::Direct).unwrap();
        prop_assert!(direct.holds);
        prop_assert_eq!(direct, d.check(a, W1Source::CosetCache).unwrap());
    }
}
