//! The adjunction between presheaves and computads and its term monad.

use std::sync::Arc;

use crate::computad::{free_computad, Computad, ComputadMorphism};
use crate::error::{Error, Result};
use crate::presheaf::Presheaf;
use crate::signature::Signature;
use crate::term::{boundary, sort_of, Context, Term};

/// The free computad on the presheaf of terms of `C`: generators are terms
/// of `C`, glued along their boundaries.
pub struct TermsOf<'a, C: ?Sized>(pub &'a C);

impl<C: Context + ?Sized> Context for TermsOf<'_, C> {
    type Gen = Term<C::Gen>;

    fn signature(&self) -> &Signature {
        self.0.signature()
    }

    fn gen_sort(&self, g: &Self::Gen) -> Result<usize> {
        sort_of(self.0, g)
    }

    fn gluing(&self, g: &Self::Gen, face: usize) -> Result<Term<Self::Gen>> {
        Ok(Term::Var(boundary(self.0, face, g)?))
    }
}

/// `η`: a term seen as a generator of the free computad on terms.
pub fn unit<V>(t: Term<V>) -> Term<Term<V>> {
    Term::Var(t)
}

/// `Term(η)`: wraps every variable.
pub fn term_unit<V: Clone>(t: &Term<V>) -> Term<Term<V>> {
    t.map_vars(&mut |v: &V| Term::Var(v.clone()))
}

/// `μ`, which is `Term(ε)`: flattens one layer of nesting.
pub fn mult<V: Clone>(t: &Term<Term<V>>) -> Term<V> {
    t.bind(&mut |inner: &Term<V>| Ok::<_, ()>(inner.clone())).expect("infallible")
}

/// `Term(μ)`: flattens the inner two layers.
pub fn term_mult<V: Clone>(t: &Term<Term<Term<V>>>) -> Term<Term<V>> {
    t.map_vars(&mut mult)
}

/// `η_X`: every cell of `x` as a variable, in flat order.
pub fn unit_family(x: &Presheaf) -> Vec<Term> {
    (0..x.total())
        .map(|n| {
            let (s, k) = x.unflat(n);
            Term::Var(x.cell_name(s, k).clone())
        })
        .collect()
}

/// The computad morphism out of the free computad on `x` corresponding to a
/// natural family of terms in `dst`, indexed in flat order.
pub fn transpose(x: &Presheaf, dst: &Arc<Computad>, family: &[Term]) -> Result<ComputadMorphism> {
    if family.len() != x.total() {
        return Err(Error::Malformed(format!("family has {} entries for {} cells", family.len(), x.total())));
    }
    let src = Arc::new(free_computad(x, dst.signature_arc().clone())?);
    let assign = (0..src.base().sort_count())
        .map(|s| {
            src.gens(s)
                .iter()
                .map(|g| {
                    let (s2, k) = x.cell_index(g).expect("cells are generators");
                    family[x.flat(s2, k)].clone()
                })
                .collect()
        })
        .collect();
    ComputadMorphism::new(src, dst.clone(), assign)
}

/// Inverse of [`transpose`]: the family of images of the cells.
pub fn untranspose(x: &Presheaf, sigma: &ComputadMorphism) -> Result<Vec<Term>> {
    (0..x.total())
        .map(|n| {
            let (s, k) = x.unflat(n);
            sigma.image(x.cell_name(s, k)).cloned()
        })
        .collect()
}

/// Checks that a family into the terms of `ctx` is natural.
pub fn is_natural_family<C: Context + ?Sized>(ctx: &C, x: &Presheaf, family: &[Term<C::Gen>]) -> Result<bool> {
    let base = x.base();
    for n in 0..x.total() {
        let (s, k) = x.unflat(n);
        if sort_of(ctx, &family[n])? != s {
            return Ok(false);
        }
        for &f in base.faces_into(s) {
            let low = x.flat(base.face(f).src, x.act(f, k));
            if boundary(ctx, f, &family[n])? != family[low] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
