#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use computads::enumerate::enumerate_terms;
use computads::fixtures::sigma_comp;
use computads::packs::kan::{sigma_kan, simplex};
use computads::{boundary, free_computad, name, Computad, ComputadMorphism, GenSpec, Name, Presheaf, Signature, Term};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn comp_sig() -> Arc<Signature> {
    Arc::new(sigma_comp())
}

/// Objects `p0..`, arrows `u0..` between random objects.
pub fn random_quiver(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, max_obj: usize, max_arr: usize) -> Computad {
    let base = sig.base();
    let (o, a) = (base.sort_index("o").unwrap(), base.sort_index("a").unwrap());
    let (s, t) = (base.face_index("s").unwrap(), base.face_index("t").unwrap());
    let n = rng.gen_range(1..=max_obj);
    let m = rng.gen_range(0..=max_arr);
    let mut specs: Vec<GenSpec> = (0..n).map(|k| GenSpec { name: name(&format!("p{k}")), sort: o, gluing: vec![] }).collect();
    for k in 0..m {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        specs.push(GenSpec {
            name: name(&format!("u{k}")),
            sort: a,
            gluing: vec![(s, Term::Var(name(&format!("p{x}")))), (t, Term::Var(name(&format!("p{y}"))))],
        });
    }
    Computad::new(sig.clone(), specs).unwrap()
}

/// A random computad over the one-dimensional Kan signature: edges glued
/// along random terms of depth at most one.
pub fn random_kan1(rng: &mut ChaCha8Rng) -> Computad {
    let sig = Arc::new(sigma_kan(1).unwrap());
    let base = sig.base().clone();
    let (p, e) = (base.sort_index("[0]").unwrap(), base.sort_index("[1]").unwrap());
    let n = rng.gen_range(1..=3);
    let points: Vec<GenSpec> = (0..n).map(|k| GenSpec { name: name(&format!("x{k}")), sort: p, gluing: vec![] }).collect();
    let c0 = Computad::new(sig.clone(), points.clone()).unwrap();
    let terms = enumerate_terms(&c0, p, 1).unwrap();
    let mut specs = points;
    for k in 0..rng.gen_range(0..=3) {
        let gluing = base.faces_into(e).iter().map(|&f| (f, terms.choose(rng).unwrap().clone())).collect();
        specs.push(GenSpec { name: name(&format!("e{k}")), sort: e, gluing });
    }
    Computad::new(sig, specs).unwrap()
}

/// `Δ[m]` as a free computad over the Kan signature of dimension `n`.
pub fn kan_simplex(n: usize, m: usize) -> Arc<Computad> {
    let sig = Arc::new(sigma_kan(n).unwrap());
    let x = simplex(sig.base(), m).unwrap();
    Arc::new(free_computad(&x, sig).unwrap())
}

/// A random morphism, choosing each image among terms of bounded depth that
/// satisfy the boundary condition; `None` if some generator has no choice.
pub fn random_morphism(rng: &mut ChaCha8Rng, src: &Arc<Computad>, dst: &Arc<Computad>, depth: usize) -> Option<ComputadMorphism> {
    random_morphism_fixing(rng, src, dst, depth, &BTreeMap::new())
}

/// As [`random_morphism`], with some images prescribed by generator name.
pub fn random_morphism_fixing(
    rng: &mut ChaCha8Rng,
    src: &Arc<Computad>,
    dst: &Arc<Computad>,
    depth: usize,
    fixed: &BTreeMap<Name, Term>,
) -> Option<ComputadMorphism> {
    let base = src.base().clone();
    let n = base.sort_count();
    let terms: Vec<Vec<Term>> = (0..n).map(|s| enumerate_terms(&**dst, s, depth).unwrap()).collect();
    let mut assign: Vec<Vec<Option<Term>>> = (0..n).map(|s| vec![None; src.gen_count(s)]).collect();
    for &s in base.sorts_by_dim() {
        for k in 0..src.gen_count(s) {
            let want: Vec<(usize, Term)> = base
                .faces_into(s)
                .iter()
                .zip(src.gluing_family(s, k))
                .map(|(&f, g)| {
                    let img = g
                        .bind(&mut |v: &Name| {
                            let (s2, k2) = src.gen_index(v)?;
                            Ok::<_, computads::Error>(assign[s2][k2].clone().expect("lower first"))
                        })
                        .unwrap();
                    (f, img)
                })
                .collect();
            let ok: Vec<&Term> = terms[s]
                .iter()
                .filter(|t| want.iter().all(|(f, img)| boundary(&**dst, *f, t).unwrap() == *img))
                .collect();
            let pick = match fixed.get(src.gen_name(s, k)) {
                Some(t) => ok.contains(&t).then(|| t.clone())?,
                None => (*ok.choose(rng)?).clone(),
            };
            assign[s][k] = Some(pick);
        }
    }
    let assign = assign.into_iter().map(|v| v.into_iter().map(Option::unwrap).collect()).collect();
    Some(ComputadMorphism::new(src.clone(), dst.clone(), assign).unwrap())
}

/// A random presheaf over the arrow category, shaped like a quiver.
pub fn random_quiver_presheaf(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, max_obj: usize, max_arr: usize) -> Presheaf {
    let q = random_quiver(rng, sig, max_obj, max_arr);
    let base = sig.base().clone();
    let cells = (0..base.sort_count()).map(|s| q.gens(s).to_vec()).collect();
    Presheaf::from_fn(base.clone(), cells, |f, c| {
        let (s, k) = q.gen_index(c).ok()?;
        let pos = base.face_position(f);
        q.gluing_family(s, k)[pos].as_var().cloned()
    })
    .unwrap()
}

/// Every morphism whose images have depth at most `depth`.
pub fn all_morphisms(src: &Arc<Computad>, dst: &Arc<Computad>, depth: usize) -> Vec<ComputadMorphism> {
    let base = src.base().clone();
    let n = base.sort_count();
    let terms: Vec<Vec<Term>> = (0..n).map(|s| enumerate_terms(&**dst, s, depth).unwrap()).collect();
    let order: Vec<(usize, usize)> =
        base.sorts_by_dim().iter().flat_map(|&s| (0..src.gen_count(s)).map(move |k| (s, k))).collect();
    let mut out = Vec::new();
    let mut assign: Vec<Vec<Option<Term>>> = (0..n).map(|s| vec![None; src.gen_count(s)]).collect();
    fn go(
        at: usize,
        order: &[(usize, usize)],
        src: &Arc<Computad>,
        dst: &Arc<Computad>,
        terms: &[Vec<Term>],
        assign: &mut Vec<Vec<Option<Term>>>,
        out: &mut Vec<ComputadMorphism>,
    ) {
        let Some(&(s, k)) = order.get(at) else {
            let a = assign.iter().map(|v| v.iter().map(|t| t.clone().unwrap()).collect()).collect();
            out.push(ComputadMorphism::new(src.clone(), dst.clone(), a).unwrap());
            return;
        };
        let base = src.base();
        let want: Vec<(usize, Term)> = base
            .faces_into(s)
            .iter()
            .zip(src.gluing_family(s, k))
            .map(|(&f, g)| {
                let img = g
                    .bind(&mut |v: &Name| {
                        let (s2, k2) = src.gen_index(v)?;
                        Ok::<_, computads::Error>(assign[s2][k2].clone().unwrap())
                    })
                    .unwrap();
                (f, img)
            })
            .collect();
        for t in &terms[s] {
            if want.iter().all(|(f, img)| boundary(&**dst, *f, t).unwrap() == *img) {
                assign[s][k] = Some(t.clone());
                go(at + 1, order, src, dst, terms, assign, out);
            }
        }
        assign[s][k] = None;
    }
    go(0, &order, src, dst, &terms, &mut assign, &mut out);
    out
}
