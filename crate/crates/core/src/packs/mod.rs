//! Builders for the standard example signatures.

pub mod globular;
pub mod grid;
pub mod kan;
pub mod universal;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::Name;
use crate::computad::{free_computad, Computad, ComputadMorphism};
use crate::error::Result;
use crate::factorization::{classifying_morphism, is_epi, lift_through_mono};
use crate::presheaf::PresheafMorphism;
use crate::signature::Signature;
use crate::term::Term;

/// The variable-to-variable morphism between free computads induced by an
/// inclusion of presheaves.
pub fn free_inclusion(sig: &Arc<Signature>, m: &PresheafMorphism) -> Result<ComputadMorphism> {
    let src = Arc::new(free_computad(&m.src, sig.clone())?);
    let dst = Arc::new(free_computad(&m.dst, sig.clone())?);
    let map: BTreeMap<Name, Term> = m
        .to_names()
        .into_iter()
        .map(|(a, b)| (crate::category::name(&a), Term::Var(crate::category::name(&b))))
        .collect();
    ComputadMorphism::from_names(src, dst, &map)
}

/// Whether `t`, a term over the target of `incl`, is the image of a term
/// whose classifying morphism is an epimorphism.
pub fn is_epi_through(incl: &ComputadMorphism, t: &Term) -> Result<bool> {
    let c: &Arc<Computad> = incl.dst();
    let sigma = classifying_morphism(c, t)?;
    Ok(match lift_through_mono(incl, &sigma)? {
        Some(lift) => is_epi(&lift),
        None => false,
    })
}

/// Renames the variables of a term along a presheaf morphism.
pub(crate) fn push_term(m: &PresheafMorphism, t: &Term) -> Term {
    let names = m.to_names();
    t.map_vars(&mut |v: &Name| crate::category::name(&names[v.as_ref()]))
}
