use proptest::prelude::*;
use ringinv::block::{self, Block2x2, BlockOutcome};
use ringinv::green::{self, GreenKind};
use ringinv::mary;
use ringinv::regularity;
use ringinv::{parse_ring, Element, Ring, Strategy as Search};

fn pick(ring: &Ring, seed: u64) -> Element {
    ring.element_at(seed % ring.finite_size().unwrap())
}

fn finite_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(parse_ring("Z:12").unwrap()),
        Just(parse_ring("GF:7").unwrap()),
        Just(parse_ring("M:2:Z:6").unwrap()),
        Just(parse_ring("M:3:Z:2").unwrap()),
        Just(parse_ring("M:2:M:2:Z:2").unwrap()),
        Just(parse_ring("M:3:GF:5").unwrap()),
    ]
}

fn rational() -> impl Strategy<Value = Element> {
    let q = Ring::rationals();
    (-6i64..6, 1i64..4)
        .prop_map(move |(n, d)| ringinv::parse_element(&q, &format!("{n}/{d}")).unwrap())
}

fn rational_matrix() -> impl Strategy<Value = Element> {
    let m = parse_ring("M:2:Q").unwrap();
    // half of the draws get a second row proportional to the first
    (proptest::collection::vec(rational(), 4), any::<bool>()).prop_map(move |(mut e, singular)| {
        if singular {
            let k = e[2].clone();
            e[2] = &k * &e[0];
            e[3] = &k * &e[1];
        }
        m.matrix_from_entries(e).unwrap()
    })
}

fn satisfies_definition(a: &Element, d: &Element, b: &Element) -> bool {
    &(d * a) * b == *d
        && &(b * a) * d == *d
        && green::relate(GreenKind::LeqH, b, d, Search::Auto)
            .unwrap()
            .is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(ring in finite_ring(), s in any::<[u64; 3]>()) {
        let (a, b, c) = (pick(&ring, s[0]), pick(&ring, s[1]), pick(&ring, s[2]));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &ring.one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inner_inverse_certificates_verify(ring in finite_ring(), s in any::<u64>()) {
        let a = pick(&ring, s);
        if let Some(cert) = regularity::inner_inverse(&a).unwrap() {
            prop_assert!(cert.verify());
        }
    }

    #[test]
    fn rational_matrices_are_regular(a in rational_matrix()) {
        let cert = regularity::inner_inverse(&a).unwrap().unwrap();
        prop_assert!(cert.verify());
    }

    #[test]
    fn unit_criterion_matches_definition(ring in finite_ring(), s in any::<[u64; 2]>()) {
        let (a, d) = (pick(&ring, s[0]), pick(&ring, s[1]));
        let out = mary::inverse_along(&a, &d, None).unwrap();
        prop_assert_eq!(out.exists(), mary::exists_via_h(&a, &d).unwrap());
        if let Some(r) = out.result() {
            prop_assert!(r.verify());
            prop_assert!(satisfies_definition(&a, &d, &r.b));
        }
    }

    #[test]
    fn unit_criterion_over_rationals(a in rational_matrix(), d in rational_matrix()) {
        let out = mary::inverse_along(&a, &d, None).unwrap();
        prop_assert_eq!(out.exists(), mary::exists_via_h(&a, &d).unwrap());
        if let Some(b) = out.inverse() {
            prop_assert!(satisfies_definition(&a, &d, b));
        }
    }

    #[test]
    fn jacobson_symmetry(ring in finite_ring(), s in any::<[u64; 2]>()) {
        let (a, b) = (pick(&ring, s[0]), pick(&ring, s[1]));
        let one = ring.one();
        let ab = (&one + &(&a * &b)).try_invert();
        let ba = (&one + &(&b * &a)).try_invert();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let (Some(ab), Some(ba)) = (ab, ba) {
            prop_assert_eq!(&one - &(&(&b * &ab) * &a), ba);
        }
    }

    #[test]
    fn green_preorders_compose(ring in finite_ring(), s in any::<[u64; 2]>()) {
        let (a, b) = (pick(&ring, s[0]), pick(&ring, s[1]));
        let ab = &a * &b;
        prop_assert!(green::leq_l(&ab, &b).unwrap().is_some());
        prop_assert!(green::leq_r(&ab, &a).unwrap().is_some());
    }

    #[test]
    fn general_block_result_is_the_inverse_along(
        entries in proptest::collection::vec(0u64..7, 8),
    ) {
        // GF(7) blocks; the defining equations are also checked directly in M_2(GF(7)).
        let f7 = parse_ring("GF:7").unwrap();
        let e: Vec<Element> = entries.iter().map(|&v| f7.element_at(v)).collect();
        let a = Block2x2::from_rows(e[0].clone(), e[2].clone(), e[1].clone(), e[3].clone()).unwrap();
        let d = Block2x2::from_rows(e[4].clone(), e[6].clone(), e[5].clone(), e[7].clone()).unwrap();
        let Ok(out) = block::inverse_along_general(&a, &d) else { return Ok(()) };
        let flat = mary::inverse_along(&a.to_element(), &d.to_element(), None).unwrap();
        match &out {
            BlockOutcome::Exists { result, .. } => {
                prop_assert!(satisfies_definition(&a.to_element(), &d.to_element(), &result.to_element()));
                prop_assert_eq!(flat.inverse(), Some(&result.to_element()));
            }
            _ => prop_assert!(!flat.exists()),
        }
    }

    #[test]
    fn block_closed_form_over_rationals(
        v in proptest::collection::vec(-3i64..4, 8),
    ) {
        let q = Ring::rationals();
        let e: Vec<Element> = v.iter().map(|&x| q.from_i64(x)).collect();
        let a = Block2x2::from_rows(e[0].clone(), e[2].clone(), e[1].clone(), e[3].clone()).unwrap();
        let d = Block2x2::from_rows(e[4].clone(), e[6].clone(), e[5].clone(), e[7].clone()).unwrap();
        if let Ok(out) = block::inverse_along_general(&a, &d) {
            let flat = mary::inverse_along(&a.to_element(), &d.to_element(), None).unwrap();
            let closed = out.inverse().map(Block2x2::to_element);
            prop_assert_eq!(flat.inverse(), closed.as_ref());
        }
    }
}
