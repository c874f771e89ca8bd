mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use computads::computad::is_isomorphic;
use computads::term::sort_of;
use computads::*;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn faces_compose_on_random_kan(seed in any::<u64>()) {
        let c = random_kan1(&mut rng(seed));
        let base = c.base().clone();
        for s in 0..base.sort_count() {
            for t in enumerate_terms(&c, s, 2).unwrap() {
                for &second in base.faces_into(s) {
                    let once = boundary(&c, second, &t).unwrap();
                    for &first in base.faces_into(base.face(second).src) {
                        let comp = base.compose_faces(first, second).unwrap();
                        prop_assert_eq!(boundary(&c, comp, &t).unwrap(), boundary(&c, first, &once).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn terms_round_trip_through_json(seed in any::<u64>()) {
        let c = random_kan1(&mut rng(seed));
        for s in 0..c.base().sort_count() {
            for t in enumerate_terms(&c, s, 1).unwrap() {
                let raw = t.to_raw(c.signature());
                let text = serde_json::to_string(&raw).unwrap();
                let back: RawTerm = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(Term::from_raw(&back, c.signature()).unwrap(), t.clone());
                prop_assert_eq!(check_term(&c, &t).unwrap(), s);
            }
        }
    }

    #[test]
    fn computads_round_trip_through_json(seed in any::<u64>()) {
        let c = Arc::new(random_kan1(&mut rng(seed)));
        let text = serde_json::to_string(&c.to_raw()).unwrap();
        let back = Arc::new(validate_computad(&serde_json::from_str(&text).unwrap()).unwrap());
        prop_assert!(is_isomorphic(&back, &c));
    }

    #[test]
    fn morphisms_compose_on_terms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = comp_sig();
        let a = Arc::new(random_quiver(&mut r, &sig, 2, 2));
        let b = Arc::new(random_quiver(&mut r, &sig, 3, 3));
        let c = Arc::new(random_quiver(&mut r, &sig, 3, 3));
        if let (Some(f), Some(g)) = (random_morphism(&mut r, &a, &b, 1), random_morphism(&mut r, &b, &c, 1)) {
            let fg = f.then(&g).unwrap();
            for s in 0..2 {
                for t in enumerate_terms(&*a, s, 2).unwrap() {
                    let two = g.apply(&f.apply(&t).unwrap()).unwrap();
                    prop_assert_eq!(fg.apply(&t).unwrap(), two.clone());
                    prop_assert_eq!(sort_of(&*c, &two).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn image_factorisation_recomposes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = comp_sig();
        let a = Arc::new(random_quiver(&mut r, &sig, 3, 3));
        let b = Arc::new(random_quiver(&mut r, &sig, 3, 4));
        if let Some(s) = random_morphism(&mut r, &a, &b, 2) {
            let f = image_factorize(&s).unwrap();
            prop_assert_eq!(f.pi.then(&f.iota).unwrap(), s.clone());
            prop_assert!(is_epi(&f.pi));
            prop_assert!(f.iota.is_mono_var());
            prop_assert_eq!(is_epi(&s), f.middle.total_gens() == b.total_gens());
        }
    }

    #[test]
    fn nerve_reconstructs_random_kan(seed in any::<u64>()) {
        let c = Arc::new(random_kan1(&mut rng(seed)));
        let back = Arc::new(reconstruct(&nerve(&c).unwrap(), c.signature_arc()).unwrap());
        prop_assert!(is_isomorphic(&back, &c));
    }

    #[test]
    fn filtration_replays_random_kan(seed in any::<u64>()) {
        let c = Arc::new(random_kan1(&mut rng(seed)));
        let f = skeletal_filtration(&c).unwrap();
        let r = computads::cofibrant::replay(&f).unwrap();
        prop_assert!(r.stages_match.iter().all(|&b| b));
        prop_assert!(is_isomorphic(&r.result, &c));
    }
}

/// Doubles every generator outside `keep`, with the two evident maps in.
fn cokernel_pair(b: &Arc<Computad>, keep: &Support) -> (ComputadMorphism, ComputadMorphism) {
    let mut specs = b.specs();
    let mut second: BTreeMap<Name, Term> = BTreeMap::new();
    for s in 0..b.base().sort_count() {
        for (k, g) in b.gens(s).iter().enumerate() {
            let img = if keep.contains(s, k) { g.clone() } else { name(&format!("{g}'")) };
            second.insert(g.clone(), Term::Var(img));
        }
    }
    for g in b.specs() {
        let (s, k) = b.gen_index(&g.name).unwrap();
        if !keep.contains(s, k) {
            specs.push(GenSpec {
                name: second[&g.name].as_var().unwrap().clone(),
                sort: g.sort,
                gluing: g.gluing.iter().map(|(f, t)| (*f, t.bind(&mut |v: &Name| Ok::<_, ()>(second[v].clone())).unwrap())).collect(),
            });
        }
    }
    let c = Arc::new(Computad::new(b.signature_arc().clone(), specs).unwrap());
    let first: BTreeMap<Name, Term> = second.keys().map(|g| (g.clone(), Term::Var(g.clone()))).collect();
    (
        ComputadMorphism::from_names(b.clone(), c.clone(), &first).unwrap(),
        ComputadMorphism::from_names(b.clone(), c, &second).unwrap(),
    )
}

#[test]
fn support_criterion_agrees_with_brute_force_epi() {
    let sig = comp_sig();
    let mut r = rng(21);
    let (mut epis, mut others) = (0, 0);
    for _ in 0..60 {
        let a = Arc::new(random_quiver(&mut r, &sig, 2, 2));
        let b = Arc::new(random_quiver(&mut r, &sig, 3, 2));
        let Some(s) = random_morphism(&mut r, &a, &b, 2) else { continue };
        if is_epi(&s) {
            let c = Arc::new(random_quiver(&mut r, &sig, 2, 3));
            let maps = all_morphisms(&b, &c, 1);
            for t1 in &maps {
                for t2 in &maps {
                    if s.then(t1).unwrap() == s.then(t2).unwrap() {
                        assert_eq!(t1, t2);
                    }
                }
            }
            epis += 1;
        } else {
            let (t1, t2) = cokernel_pair(&b, &support_morphism(&s));
            assert_ne!(t1, t2);
            assert_eq!(s.then(&t1).unwrap(), s.then(&t2).unwrap());
            others += 1;
        }
    }
    assert!(epis > 0 && others > 0);
}

#[test]
fn sequential_and_parallel_enumeration_agree() {
    use computads::enumerate::enumerate_terms_with;
    let c = kan_simplex(2, 2);
    for s in 0..c.base().sort_count() {
        let a = enumerate_terms_with(Exec::Sequential, &*c, s, 2).unwrap();
        let b = enumerate_terms_with(Exec::Parallel, &*c, s, 2).unwrap();
        assert_eq!(a, b);
    }
}
