//! Supports of terms and morphisms, and the (epi, variable-to-variable mono)
//! factorisation they induce.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::category::Name;
use crate::computad::{Computad, ComputadMorphism, GenSpec};
use crate::error::{Error, Result};
use crate::monad::transpose;
use crate::presheaf::representable;
use crate::term::{boundary, sort_of, Term};

/// Generators of a computad, as `[sort] -> {generator index}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    pub sets: Vec<BTreeSet<usize>>,
}

impl Support {
    pub fn empty(sorts: usize) -> Support {
        Support { sets: vec![BTreeSet::new(); sorts] }
    }

    pub fn union_with(&mut self, other: &Support) {
        for (a, b) in self.sets.iter_mut().zip(&other.sets) {
            a.extend(b.iter().copied());
        }
    }

    pub fn at(&self, sort: usize) -> &BTreeSet<usize> {
        &self.sets[sort]
    }

    pub fn contains(&self, sort: usize, k: usize) -> bool {
        self.sets[sort].contains(&k)
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }

    pub fn len(&self) -> usize {
        self.sets.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self, c: &Computad) -> bool {
        self.len() == c.total_gens()
    }

    /// Generator names at a sort, sorted.
    pub fn names(&self, c: &Computad, sort: usize) -> Vec<Name> {
        self.sets[sort].iter().map(|&k| c.gen_name(sort, k).clone()).collect()
    }
}

/// Memoised supports over one computad.
pub struct Supports<'a> {
    c: &'a Computad,
    gens: Vec<Vec<Support>>,
    terms: HashMap<Term, Support>,
}

impl<'a> Supports<'a> {
    pub fn new(c: &'a Computad) -> Supports<'a> {
        let base = c.base();
        let n = base.sort_count();
        let mut gens: Vec<Vec<Support>> = (0..n).map(|_| Vec::new()).collect();
        let mut done: Vec<Vec<Option<Support>>> = (0..n).map(|s| vec![None; c.gen_count(s)]).collect();
        for &s in base.sorts_by_dim() {
            for k in 0..c.gen_count(s) {
                let mut sup = Support::empty(n);
                sup.sets[s].insert(k);
                for t in c.gluing_family(s, k) {
                    t.for_each_var(&mut |g: &Name| {
                        let (s2, k2) = c.gen_index(g).expect("gluing over the computad");
                        sup.union_with(done[s2][k2].as_ref().expect("lower dimension first"));
                    });
                }
                done[s][k] = Some(sup);
            }
        }
        for s in 0..n {
            gens[s] = done[s].drain(..).map(|o| o.expect("filled")).collect();
        }
        Supports { c, gens, terms: HashMap::new() }
    }

    pub fn computad(&self) -> &Computad {
        self.c
    }

    pub fn of_generator(&self, sort: usize, k: usize) -> &Support {
        &self.gens[sort][k]
    }

    /// `supp(t)`: the variables of `t` and everything their gluings reach.
    pub fn of_term(&mut self, t: &Term) -> Result<Support> {
        if let Some(s) = self.terms.get(t) {
            return Ok(s.clone());
        }
        let sup = match t {
            Term::Var(g) => {
                let (s, k) = self.c.gen_index(g)?;
                self.gens[s][k].clone()
            }
            Term::App(_, args) => {
                let mut sup = Support::empty(self.gens.len());
                for a in args.iter() {
                    let sa = self.of_term(a)?;
                    sup.union_with(&sa);
                }
                sup
            }
        };
        self.terms.insert(t.clone(), sup.clone());
        Ok(sup)
    }
}

pub fn support_term(c: &Computad, t: &Term) -> Result<Support> {
    Supports::new(c).of_term(t)
}

/// `supp(σ)`: the union of the supports of the images of generators.
pub fn support_morphism(sigma: &ComputadMorphism) -> Support {
    let dst = sigma.dst();
    let mut memo = Supports::new(dst);
    let mut sup = Support::empty(dst.base().sort_count());
    for images in sigma.assignment() {
        for t in images {
            sup.union_with(&memo.of_term(t).expect("images are terms of the target"));
        }
    }
    sup
}

/// The image of a variable-to-variable morphism, as a support.
fn var_image(rho: &ComputadMorphism) -> Result<(Support, Vec<Vec<Option<usize>>>)> {
    let map = rho.var_map().ok_or_else(|| Error::NotVarToVar("the mono must send generators to generators".into()))?;
    if !rho.is_mono_var() {
        return Err(Error::NotMono("two generators share an image".into()));
    }
    let dst = rho.dst();
    let mut inverse: Vec<Vec<Option<usize>>> = (0..map.len()).map(|s| vec![None; dst.gen_count(s)]).collect();
    let mut sup = Support::empty(map.len());
    for (s, ks) in map.iter().enumerate() {
        for (k, &j) in ks.iter().enumerate() {
            inverse[s][j] = Some(k);
            sup.sets[s].insert(j);
        }
    }
    Ok((sup, inverse))
}

/// The unique `σ'` with `ρ∘σ' = σ`, present exactly when the support of `σ`
/// lies in the image of `ρ`.
pub fn lift_through_mono(rho: &ComputadMorphism, sigma: &ComputadMorphism) -> Result<Option<ComputadMorphism>> {
    if rho.dst() != sigma.dst() {
        return Err(Error::EndpointMismatch);
    }
    let (image, inverse) = var_image(rho)?;
    if !support_morphism(sigma).is_subset(&image) {
        return Ok(None);
    }
    let a = rho.src();
    let c = rho.dst();
    let assign = sigma
        .assignment()
        .iter()
        .map(|ts| {
            ts.iter()
                .map(|t| {
                    t.map_vars(&mut |g: &Name| {
                        let (s, k) = c.gen_index(g).expect("target generator");
                        a.gen_name(s, inverse[s][k].expect("inside the image")).clone()
                    })
                })
                .collect()
        })
        .collect();
    ComputadMorphism::new(sigma.src().clone(), a.clone(), assign).map(Some)
}

/// The sub-computad spanned by a support closed under gluings, with its
/// inclusion.
pub fn sub_computad(c: &Arc<Computad>, sup: &Support) -> Result<(Arc<Computad>, ComputadMorphism)> {
    let specs: Vec<GenSpec> = c
        .specs()
        .into_iter()
        .filter(|g| {
            let (s, k) = c.gen_index(&g.name).expect("own generator");
            sup.contains(s, k)
        })
        .collect();
    let m = Arc::new(Computad::new(c.signature_arc().clone(), specs)?);
    let assign = (0..m.base().sort_count())
        .map(|s| m.gens(s).iter().map(|g| Term::Var(g.clone())).collect())
        .collect();
    let iota = ComputadMorphism::new(m.clone(), c.clone(), assign)?;
    Ok((m, iota))
}

/// `σ = ι∘π` with `π` epi and `ι` a variable-to-variable mono.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    pub pi: ComputadMorphism,
    pub middle: Arc<Computad>,
    pub iota: ComputadMorphism,
}

pub fn image_factorize(sigma: &ComputadMorphism) -> Result<ImageFactorization> {
    let sup = support_morphism(sigma);
    let (middle, iota) = sub_computad(sigma.dst(), &sup)?;
    let pi = lift_through_mono(&iota, sigma)?.expect("the support lies in its own image");
    Ok(ImageFactorization { pi, middle, iota })
}

/// The unique comparison `χ` between two factorisations of one morphism,
/// with `χ∘π = π'` and `ι'∘χ = ι`; `None` if they are not related by an
/// isomorphism.
pub fn compare_factorizations(a: &ImageFactorization, b: &ImageFactorization) -> Result<Option<ComputadMorphism>> {
    let (Some(chi), Some(back)) = (lift_through_mono(&b.iota, &a.iota)?, lift_through_mono(&a.iota, &b.iota)?) else {
        return Ok(None);
    };
    let round = chi.then(&back)?;
    let other = back.then(&chi)?;
    let ok = round == ComputadMorphism::identity(a.middle.clone())
        && other == ComputadMorphism::identity(b.middle.clone())
        && a.pi.then(&chi)? == b.pi;
    Ok(ok.then_some(chi))
}

/// Epimorphisms are exactly the morphisms of full support.
pub fn is_epi(sigma: &ComputadMorphism) -> bool {
    support_morphism(sigma).is_full(sigma.dst())
}

/// `𝔻^j → C` sending the top cell to `t` and each face cell to the
/// matching boundary of `t`.
pub fn classifying_morphism(c: &Arc<Computad>, t: &Term) -> Result<ComputadMorphism> {
    let base = c.base();
    let j = sort_of(&**c, t)?;
    let x = representable(base, &base.sort(j).id)?;
    let family = (0..x.total())
        .map(|n| {
            let (s, k) = x.unflat(n);
            match base.face_index(x.cell_name(s, k)) {
                Ok(f) => boundary(&**c, f, t),
                Err(_) => Ok(t.clone()),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    transpose(&x, c, &family)
}

/// `e = ι∘π` with `π∘ι = id`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub retraction: ComputadMorphism,
    pub section: ComputadMorphism,
    pub object: Arc<Computad>,
}

pub fn split_idempotent(e: &ComputadMorphism) -> Result<Splitting> {
    if e.src() != e.dst() || e.then(e)? != *e {
        return Err(Error::NotIdempotent);
    }
    let f = image_factorize(e)?;
    debug_assert_eq!(f.iota.then(&f.pi)?, ComputadMorphism::identity(f.middle.clone()));
    Ok(Splitting { retraction: f.pi, section: f.iota, object: f.middle })
}
