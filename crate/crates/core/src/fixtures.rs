//! Small named examples shared by tests, benches and the command line.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{configurations, Algebra, Interpretation};
use crate::category::{arrow_category, name};
use crate::packs::universal::{group_signature, module_signature};
use crate::computad::{free_computad, Computad, GenSpec};
use crate::presheaf::{representable, validate_presheaf_on, Presheaf, RawAction, RawPresheaf};
use crate::signature::{Signature, SymbolSpec};
use crate::term::Term;

/// The walking composable pair `x -f-> y -g-> z` over the arrow category.
pub fn path_arity() -> Presheaf {
    let base = Arc::new(arrow_category());
    let raw = RawPresheaf {
        category: None,
        cells: BTreeMap::from([
            ("o".to_string(), vec!["x".into(), "y".into(), "z".into()]),
            ("a".to_string(), vec!["f".into(), "g".into()]),
        ]),
        action: [("s", "f", "x"), ("t", "f", "y"), ("s", "g", "y"), ("t", "g", "z")]
            .iter()
            .map(|(f, a, b)| RawAction { face: f.to_string(), from: a.to_string(), to: b.to_string() })
            .collect(),
    };
    validate_presheaf_on(&raw, base).expect("path presheaf")
}

/// One binary composition `comp` of sort `a` with arity the composable pair.
pub fn sigma_comp() -> Signature {
    let arity = Arc::new(path_arity());
    let base = arity.base().clone();
    let s = base.face_index("s").expect("s");
    let t = base.face_index("t").expect("t");
    Signature::new(
        base.clone(),
        vec![SymbolSpec {
            id: name("comp"),
            sort: base.sort_index("a").expect("a"),
            arity,
            boundary: vec![(s, Term::Var(name("x"))), (t, Term::Var(name("z")))],
        }],
    )
    .expect("composition signature")
}

/// Builds a computad over an arrow-category signature from objects and
/// `(name, source, target)` arrows.
pub fn quiver(sig: &Arc<Signature>, objects: &[&str], arrows: &[(&str, &str, &str)]) -> crate::Result<Computad> {
    let base = sig.base();
    let (o, a) = (base.sort_index("o")?, base.sort_index("a")?);
    let (s, t) = (base.face_index("s")?, base.face_index("t")?);
    let mut specs: Vec<GenSpec> = objects.iter().map(|p| GenSpec { name: name(p), sort: o, gluing: vec![] }).collect();
    specs.extend(arrows.iter().map(|(u, x, y)| GenSpec {
        name: name(u),
        sort: a,
        gluing: vec![(s, Term::Var(name(x))), (t, Term::Var(name(y)))],
    }));
    Computad::new(sig.clone(), specs)
}

/// Objects `p, q, r` and arrows `u: p -> q`, `v: q -> r` over `sigma_comp`.
pub fn walk2() -> Computad {
    quiver(&Arc::new(sigma_comp()), &["p", "q", "r"], &[("u", "p", "q"), ("v", "q", "r")]).expect("walk2")
}

/// `comp[u,v]` in [`walk2`].
pub fn comp_uv() -> Term {
    Term::app(
        name("comp"),
        // flat order of the arity: a-cells f, g then o-cells x, y, z
        ["u", "v", "p", "q", "r"].iter().map(|g| Term::Var(name(g))).collect(),
    )
}

/// The representable computad on a sort.
pub fn disk(sig: &Arc<Signature>, sort: &str) -> Computad {
    let y = representable(sig.base(), sort).expect("sort");
    free_computad(&y, sig.clone()).expect("same base")
}

/// Paths in `0 -> 1 -> 2` with concatenation, over `sigma_comp`.
pub fn pathcat() -> Algebra {
    let sig = Arc::new(sigma_comp());
    let base = sig.base().clone();
    let path = |i: usize, j: usize| -> String {
        match (i, j) {
            (i, j) if i == j => format!("e{i}"),
            (0, 1) => "a".into(),
            (1, 2) => "b".into(),
            _ => "ab".into(),
        }
    };
    let ends: HashMap<String, (usize, usize)> =
        (0..3).flat_map(|i| (i..3).map(move |j| (i, j))).map(|(i, j)| (path(i, j), (i, j))).collect();
    let (o, a) = (base.sort_index("o").expect("o"), base.sort_index("a").expect("a"));
    let s = base.face_index("s").expect("s");
    let mut cells = vec![Vec::new(); 2];
    cells[o] = (0..3).map(|i| name(&i.to_string())).collect();
    cells[a] = ends.keys().map(|p| name(p)).collect();
    let carrier = Arc::new(
        Presheaf::from_fn(base, cells, |f, c| {
            let (i, j) = ends[c.as_ref()];
            Some(name(&if f == s { i } else { j }.to_string()))
        })
        .expect("path carrier"),
    );
    let comp = sig.symbol("comp").expect("comp");
    let mut table = HashMap::new();
    for x in configurations(comp.arity(), &carrier) {
        let (i, _) = ends[carrier.cell_name(a, x[0]).as_ref()];
        let (_, k) = ends[carrier.cell_name(a, x[1]).as_ref()];
        table.insert(x, carrier.cell_index(&path(i, k)).expect("path").1);
    }
    Algebra::new(sig, carrier, vec![(name("comp"), Interpretation::Table(table))]).expect("pathcat")
}

fn z5_carrier(base: &Arc<crate::DirectCategory>) -> Vec<Vec<crate::Name>> {
    (0..base.sort_count()).map(|_| Vec::new()).collect()
}

/// The integers mod 5 as a group, with operations computed on demand.
pub fn z5_group() -> Algebra {
    let sig = Arc::new(group_signature());
    let base = sig.base().clone();
    let mut cells = z5_carrier(&base);
    cells[0] = (0..5).map(|k| name(&k.to_string())).collect();
    let carrier = Arc::new(Presheaf::from_fn(base, cells, |_, _| None).expect("carrier"));
    let ops: Vec<(crate::Name, Interpretation)> = vec![
        (name("+"), Interpretation::Oracle(Arc::new(|x: &[usize]| (x[0] + x[1]) % 5))),
        (name("0"), Interpretation::Oracle(Arc::new(|_: &[usize]| 0))),
        (name("-"), Interpretation::Oracle(Arc::new(|x: &[usize]| (5 - x[0]) % 5))),
    ];
    Algebra::new(sig, carrier, ops).expect("Z/5")
}

/// `Z/5` as a module over itself.
pub fn z5_module() -> Algebra {
    let sig = Arc::new(module_signature());
    let base = sig.base().clone();
    let mut cells = z5_carrier(&base);
    for c in cells.iter_mut() {
        *c = (0..5).map(|k| name(&k.to_string())).collect();
    }
    let r = base.sort_index("R").expect("R");
    for c in cells[1 - r].iter_mut() {
        *c = name(&format!("v{c}"));
    }
    let carrier = Arc::new(Presheaf::from_fn(base, cells, |_, _| None).expect("carrier"));
    let op = |f: fn(&[usize]) -> usize| Interpretation::Oracle(Arc::new(f));
    let ops: Vec<(crate::Name, Interpretation)> = vec![
        (name("+R"), op(|x| (x[0] + x[1]) % 5)),
        (name("*R"), op(|x| (x[0] * x[1]) % 5)),
        (name("0R"), op(|_| 0)),
        (name("1R"), op(|_| 1)),
        (name("-R"), op(|x| (5 - x[0]) % 5)),
        (name("+V"), op(|x| (x[0] + x[1]) % 5)),
        (name("0V"), op(|_| 0)),
        (name("-V"), op(|x| (5 - x[0]) % 5)),
        (name("*V"), op(|x| (x[0] * x[1]) % 5)),
    ];
    Algebra::new(sig, carrier, ops).expect("Z/5 module")
}
