use proptest::prelude::*;

use hbs_core::analysis::{classify_with, Classification, VertexIndex};
use hbs_core::derivations::decorate;
use hbs_core::golden::{CycloPoint, GoldenRational, Isometry};
use hbs_core::io::{parse, serialize, PatchFile};
use hbs_core::seeds::{seed_names, seed_patch};
use hbs_core::substitution::{p2_rule, p3_rule, star_rule, substitute, SubstitutionRule};
use hbs_core::tiling::{check_matching, physical_area, Patch, Tileset};

fn golden() -> impl Strategy<Value = GoldenRational> {
    (-40i64..40, 1i64..12, -40i64..40, 1i64..12).prop_map(|(an, ad, bn, bd)| GoldenRational::from_fractions(an, ad, bn, bd))
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (0i32..10, any::<bool>(), prop::array::uniform4(-6i64..6))
        .prop_map(|(r, f, [a, b, c, d])| Isometry::new(r, f, CycloPoint::new(a, b, c, d)))
}

fn rule(t: Tileset) -> &'static SubstitutionRule {
    match t {
        Tileset::P2 => p2_rule(),
        Tileset::P3 => p3_rule(),
        _ => star_rule(),
    }
}

/// A seed of a substitution tileset, substituted a few times.
fn generated() -> impl Strategy<Value = Patch> {
    prop_oneof![Just(Tileset::P2), Just(Tileset::P3), Just(Tileset::Star)]
        .prop_flat_map(|t| (Just(t), 0..seed_names(t).len(), 1u32..4))
        .prop_map(|(t, i, k)| substitute(&seed_patch(t, seed_names(t)[i]).unwrap(), rule(t), k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in golden(), b in golden(), c in golden()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &GoldenRational::zero(), a.clone());
        prop_assert_eq!(&a * &GoldenRational::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), GoldenRational::one());
            prop_assert_eq!((&(&b * &a) / &a).unwrap(), b.clone());
        } else {
            prop_assert!(a.inverse().is_err());
        }
        let phi = GoldenRational::phi();
        prop_assert_eq!(&phi * &phi, &phi + &GoldenRational::one());
    }

    // the Star rule centres children on parent vertices, so it overhangs
    // the parent and only the dissection rules are checked here
    #[test]
    fn substitution_conserves_area(p in generated(), k in 1u32..3) {
        prop_assume!(p.tileset != Tileset::Star);
        let q = substitute(&p, rule(p.tileset), k).unwrap();
        prop_assert_eq!(physical_area(&q), physical_area(&p));
        prop_assert!(check_matching(&q).is_empty());
    }

    #[test]
    fn decoration_conserves_area(i in 0usize..3, k in 1u32..3, with_p3 in any::<bool>()) {
        let seed = seed_patch(Tileset::Star, seed_names(Tileset::Star)[i]).unwrap();
        let star = substitute(&seed, star_rule(), k).unwrap();
        let with = if with_p3 { Tileset::P3 } else { Tileset::P2 };
        let dec = decorate(&star, with).unwrap();
        prop_assert_eq!(physical_area(&dec), physical_area(&star));
        prop_assert!(check_matching(&dec).is_empty());
    }

    #[test]
    fn serialization_round_trips(p in generated(), g in isometry()) {
        let f = PatchFile::new(p.transformed(&g));
        let text = serialize(&f);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn classification_is_isometry_invariant(p in generated(), g in isometry()) {
        let q = p.transformed(&g);
        let (ip, iq) = (VertexIndex::new(&p), VertexIndex::new(&q));
        for v in ip.sorted_vertices() {
            let a = classify_with(&p, &ip, v).unwrap();
            let b = classify_with(&q, &iq, g.apply(v)).unwrap();
            match (a, b) {
                (Classification::Config(x), Classification::Config(y)) => prop_assert_eq!(x.name, y.name),
                (x, y) => prop_assert_eq!(x, y),
            }
        }
    }
}
