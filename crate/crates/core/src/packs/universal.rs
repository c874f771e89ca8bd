//! Many-sorted universal algebra: signatures over a discrete category.

use std::sync::Arc;

use crate::category::{name, validate_category, DirectCategory, RawCategory, RawSort};
use crate::error::Result;
use crate::presheaf::Presheaf;
use crate::signature::{Signature, SymbolSpec};

/// The discrete category on the given sorts, all of dimension 0.
pub fn discrete_category(sorts: &[&str]) -> Result<DirectCategory> {
    validate_category(&RawCategory {
        sorts: sorts.iter().map(|s| RawSort { id: s.to_string(), dim: 0 }).collect(),
        faces: vec![],
        compose: vec![],
    })
}

/// A coproduct of representables on a discrete category; cells are named
/// `x0, x1, ...` in the order given.
pub fn discrete_arity(base: &Arc<DirectCategory>, sorts: &[&str]) -> Result<Presheaf> {
    let mut cells = vec![Vec::new(); base.sort_count()];
    for (k, s) in sorts.iter().enumerate() {
        cells[base.sort_index(s)?].push(name(&format!("x{k}")));
    }
    Presheaf::from_fn(base.clone(), cells, |_, _| None)
}

/// Symbols given as `(id, output sort, input sorts)`.
pub fn discrete_signature(sorts: &[&str], decls: &[(&str, &str, &[&str])]) -> Result<Signature> {
    let base = Arc::new(discrete_category(sorts)?);
    let specs = decls
        .iter()
        .map(|(id, out, ins)| {
            Ok(SymbolSpec {
                id: name(id),
                sort: base.sort_index(out)?,
                arity: Arc::new(discrete_arity(&base, ins)?),
                boundary: vec![],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Signature::new(base, specs)
}

/// `+`, `0` and `-` on the single sort `*`.
pub fn group_signature() -> Signature {
    discrete_signature(&["*"], &[("+", "*", &["*", "*"]), ("0", "*", &[]), ("-", "*", &["*"])]).expect("group signature")
}

/// Ring operations on `R` and vector operations on `V`.
pub fn module_signature() -> Signature {
    discrete_signature(
        &["R", "V"],
        &[
            ("+R", "R", &["R", "R"]),
            ("*R", "R", &["R", "R"]),
            ("0R", "R", &[]),
            ("1R", "R", &[]),
            ("-R", "R", &["R"]),
            ("+V", "V", &["V", "V"]),
            ("0V", "V", &[]),
            ("-V", "V", &["V"]),
            ("*V", "V", &["R", "V"]),
        ],
    )
    .expect("module signature")
}
