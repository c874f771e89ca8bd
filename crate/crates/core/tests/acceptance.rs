//! One PASS/FAIL line per acceptance criterion; exits non-zero on failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use computads::algebra::FreeAlgebra;
use computads::cofibrant::replay;
use computads::computad::is_isomorphic;
use computads::factorization::{compare_factorizations, ImageFactorization};
use computads::fixtures::{disk, pathcat, walk2, z5_group};
use computads::monad::{mult, term_mult, term_unit, unit, TermsOf};
use computads::packs::free_inclusion;
use computads::packs::grid::{cube_category, cube_sort, grid_positions, Grid};
use computads::packs::kan::{sigma_kan, simplex_sort};
use computads::packs::universal::group_signature;
use computads::plex::Representer;
use computads::*;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e(err: Error) -> String {
    err.to_string()
}

fn within(start: Instant, limit: u64) -> std::result::Result<(), String> {
    let t = start.elapsed();
    if t > Duration::from_secs(limit) {
        return Err(format!("took {t:?}, limit {limit}s"));
    }
    Ok(())
}

fn all_terms<C: FiniteContext + Sync>(c: &C, depth: usize) -> std::result::Result<Vec<Term<C::Gen>>, String>
where
    C::Gen: Send + Sync,
{
    let n = c.signature().base().sort_count();
    let mut out = Vec::new();
    for s in 0..n {
        out.extend(enumerate_terms(c, s, depth).map_err(e)?);
    }
    Ok(out)
}

fn kan_fixtures() -> Vec<(&'static str, Arc<Computad>)> {
    vec![("Kan(2) on Δ[1]", kan_simplex(2, 1)), ("Kan(2) on Δ[2]", kan_simplex(2, 2))]
}

fn comp_fixtures() -> Vec<(&'static str, Arc<Computad>)> {
    let sig = comp_sig();
    vec![("WALK2", Arc::new(walk2())), ("D^a", Arc::new(disk(&sig, "a")))]
}

fn functoriality() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0usize;
    for (label, c) in comp_fixtures().into_iter().chain(kan_fixtures()) {
        let base = c.base().clone();
        for t in all_terms(&*c, 2)? {
            let i = computads::term::sort_of(&*c, &t).map_err(e)?;
            for &second in base.faces_into(i) {
                let once = boundary(&*c, second, &t).map_err(e)?;
                for &first in base.faces_into(base.face(second).src) {
                    let composite = base.compose_faces(first, second).ok_or("missing composite")?;
                    let lhs = boundary(&*c, composite, &t).map_err(e)?;
                    let rhs = boundary(&*c, first, &once).map_err(e)?;
                    ensure!(lhs == rhs, "{label}: {t} along {} then {}", base.face(first).id, base.face(second).id);
                    pairs += 1;
                }
            }
        }
    }
    ensure!(pairs > 0, "no composable face pairs were exercised");
    within(start, 30)?;
    Ok(format!("{pairs} face pairs"))
}

/// Finitely many generators picked out of a context, so nested terms can be
/// enumerated.
struct Bounded<C: Context> {
    ctx: C,
    gens: Vec<Vec<C::Gen>>,
}

impl<C: Context> Context for Bounded<C> {
    type Gen = C::Gen;
    fn signature(&self) -> &Signature {
        self.ctx.signature()
    }
    fn gen_sort(&self, g: &C::Gen) -> Result<usize> {
        self.ctx.gen_sort(g)
    }
    fn gluing(&self, g: &C::Gen, face: usize) -> Result<Term<C::Gen>> {
        self.ctx.gluing(g, face)
    }
}

impl<C: Context> FiniteContext for Bounded<C> {
    fn generators(&self, sort: usize) -> Vec<C::Gen> {
        self.gens[sort].clone()
    }
}

fn bounded<C: FiniteContext + Sync + 'static>(c: C, depth: usize) -> Bounded<TermsOf<'static, C>>
where
    C::Gen: Send + Sync,
{
    let c: &'static C = Box::leak(Box::new(c));
    let n = c.signature().base().sort_count();
    let gens = (0..n).map(|s| enumerate_terms(c, s, depth).unwrap()).collect();
    Bounded { ctx: TermsOf(c), gens }
}

fn monad_laws() -> Outcome {
    let start = Instant::now();
    let mut units = 0usize;
    for (label, c) in comp_fixtures().into_iter().chain(kan_fixtures()) {
        for t in all_terms(&*c, 2)? {
            ensure!(mult(&unit(t.clone())) == t, "{label}: μη fails on {t}");
            ensure!(mult(&term_unit(&t)) == t, "{label}: μT(η) fails on {t}");
            units += 1;
        }
    }
    let mut nested = 0usize;
    for (label, c) in [("WALK2", walk2()), ("Kan(1) on Δ[1]", (*kan_simplex(1, 1)).clone())] {
        let one = bounded(c.clone(), 1);
        let two = bounded(one, 1);
        for t in all_terms(&two, 1)? {
            let lhs = mult(&mult(&t));
            let rhs = mult(&term_mult(&t));
            ensure!(lhs == rhs, "{label}: associativity fails on {t}");
            computads::check_term(&c, &lhs).map_err(e)?;
            nested += 1;
        }
    }
    within(start, 60)?;
    Ok(format!("{units} unit checks, {nested} triple nestings"))
}

fn cartesian_unit() -> Outcome {
    let sig = comp_sig();
    let mut r = rng(3);
    let mut done = 0;
    let mut terms = 0usize;
    while done < 20 {
        let x = Arc::new(random_quiver_presheaf(&mut r, &sig, 3, 3));
        let y = Arc::new(random_quiver_presheaf(&mut r, &sig, 3, 3));
        let homs = enumerate_hom(&x, &y).map_err(e)?;
        let Some(f) = homs.choose(&mut r) else { continue };
        let tf = free_inclusion(&sig, f).map_err(e)?;
        let mut pullback = 0usize;
        for t in all_terms(&**tf.src(), 2)? {
            let image = tf.apply(&t).map_err(e)?;
            for s in 0..y.base().sort_count() {
                for (k, yc) in y.cells(s).iter().enumerate() {
                    if image != Term::Var(yc.clone()) {
                        continue;
                    }
                    let Some(v) = t.as_var() else {
                        return Err(format!("{t} is not a variable but maps to {yc}"));
                    };
                    let (s2, k2) = x.cell_index(v).map_err(e)?;
                    ensure!(s2 == s && f.apply(s2, k2) == k, "{v} does not map to {yc}");
                    pullback += 1;
                }
            }
            terms += 1;
        }
        ensure!(pullback == x.total(), "pullback has {pullback} elements, X has {}", x.total());
        done += 1;
    }
    Ok(format!("20 morphisms, {terms} terms"))
}

/// Every assignment of generators to cells of matching sort satisfying the
/// gluings, counted by exhaustion.
fn brute_assignments(c: &Computad, carrier: &Presheaf) -> usize {
    let base = c.base();
    let gens: Vec<(usize, usize)> =
        base.sorts_by_dim().iter().flat_map(|&s| (0..c.gen_count(s)).map(move |k| (s, k))).collect();
    let sizes: Vec<usize> = gens.iter().map(|&(s, _)| carrier.cell_count(s)).collect();
    let mut count = 0;
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let value = |name: &Name| -> usize {
            let pos = gens.iter().position(|&(s, k)| c.gen_name(s, k) == name).unwrap();
            choice[pos]
        };
        let ok = gens.iter().enumerate().all(|(n, &(s, k))| {
            base.faces_into(s).iter().zip(c.gluing_family(s, k)).all(|(&f, g)| {
                let v = g.as_var().expect("variable gluings");
                carrier.act(f, choice[n]) == value(v)
            })
        });
        count += ok as usize;
        for n in 0..choice.len() {
            choice[n] += 1;
            if choice[n] < sizes[n] {
                continue 'outer;
            }
            choice[n] = 0;
        }
        break;
    }
    if sizes.contains(&0) {
        0
    } else {
        count
    }
}

fn universal_property() -> Outcome {
    let w = Arc::new(walk2());
    let free = FreeAlgebra::new(w.clone(), 2).map_err(e)?;
    ensure!(free.is_exact(), "the free algebra on WALK2 should be finite");
    let fa = free.materialise().map_err(e)?;
    let p = pathcat();
    let homs = enumerate_hom(fa.carrier(), p.carrier()).map_err(e)?;
    let mut count = 0;
    for h in &homs {
        if check_algebra_morphism(&fa, &p, h).map_err(e)?.is_none() {
            count += 1;
        }
    }
    let oracle = brute_assignments(&w, p.carrier());
    ensure!(count == oracle, "{count} algebra morphisms but {oracle} generator assignments");
    Ok(format!("{count} = {oracle} (of {} presheaf maps)", homs.len()))
}

/// Generators a term depends on, by direct recursion.
fn oracle_support(c: &Computad, t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        match t {
            Term::Var(g) => {
                if out.insert(g.clone()) {
                    let (s, k) = c.gen_index(&g).unwrap();
                    stack.extend(c.gluing_family(s, k).iter().cloned());
                }
            }
            Term::App(_, args) => stack.extend(args.iter().cloned()),
        }
    }
    out
}

fn support_names(c: &Computad, sup: &Support) -> BTreeSet<Name> {
    (0..c.base().sort_count()).flat_map(|s| sup.names(c, s)).collect()
}

fn support_lemma() -> Outcome {
    let mut r = rng(5);
    let sig = comp_sig();
    let mut cases: Vec<(Arc<Computad>, Vec<ComputadMorphism>)> = Vec::new();
    for (_, c) in comp_fixtures() {
        let mut ms = vec![ComputadMorphism::identity(c.clone())];
        while ms.len() < 6 {
            let d = Arc::new(random_quiver(&mut r, &sig, 3, 4));
            ms.extend(random_morphism(&mut r, &c, &d, 2));
        }
        cases.push((c, ms));
    }
    let (k1, k2) = (kan_simplex(2, 1), kan_simplex(2, 2));
    let mut ms = vec![ComputadMorphism::identity(k1.clone())];
    for _ in 0..3 {
        ms.extend(random_morphism(&mut r, &k1, &k2, 1));
    }
    cases.push((k1, ms));
    let mut checked = 0usize;
    for (c, ms) in &cases {
        for t in all_terms(&**c, 2)? {
            let st = support_term(c, &t).map_err(e)?;
            ensure!(support_names(c, &st) == oracle_support(c, &t), "support of {t} disagrees with recursion");
            let i = computads::term::sort_of(&**c, &t).map_err(e)?;
            for &f in c.base().faces_into(i) {
                let sb = support_term(c, &boundary(&**c, f, &t).map_err(e)?).map_err(e)?;
                ensure!(sb.is_subset(&st), "supp of a face of {t} escapes supp {t}");
            }
            for m in ms {
                let lhs = support_term(m.dst(), &m.apply(&t).map_err(e)?).map_err(e)?;
                let mut rhs = Support::empty(c.base().sort_count());
                for s in 0..c.base().sort_count() {
                    for &k in st.at(s) {
                        let img = &m.assignment()[s][k];
                        rhs.union_with(&support_term(m.dst(), img).map_err(e)?);
                    }
                }
                ensure!(lhs == rhs, "supp σ({t}) is not the union over supp {t}");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} terms"))
}

fn renamed(c: &Arc<Computad>) -> (Arc<Computad>, ComputadMorphism) {
    let specs = c.specs();
    let map: BTreeMap<Name, Term> =
        specs.iter().map(|g| (g.name.clone(), Term::Var(name(&format!("m_{}", g.name))))).collect();
    let specs = specs
        .into_iter()
        .map(|g| GenSpec {
            name: map[&g.name].as_var().unwrap().clone(),
            sort: g.sort,
            gluing: g
                .gluing
                .into_iter()
                .map(|(f, t)| (f, t.bind(&mut |v: &Name| Ok::<_, ()>(map[v].clone())).unwrap()))
                .collect(),
        })
        .collect();
    let d = Arc::new(Computad::new(c.signature_arc().clone(), specs).unwrap());
    let theta = ComputadMorphism::from_names(c.clone(), d.clone(), &map).unwrap();
    (d, theta)
}

fn inverse_var(m: &ComputadMorphism) -> ComputadMorphism {
    let map: BTreeMap<Name, Term> = (0..m.src().base().sort_count())
        .flat_map(|s| (0..m.src().gen_count(s)).map(move |k| (s, k)))
        .map(|(s, k)| (m.assignment()[s][k].as_var().unwrap().clone(), Term::Var(m.src().gen_name(s, k).clone())))
        .collect();
    ComputadMorphism::from_names(m.dst().clone(), m.src().clone(), &map).unwrap()
}

fn factorisation() -> Outcome {
    let sig = comp_sig();
    let mut r = rng(6);
    let mut done = 0;
    while done < 100 {
        let src = Arc::new(random_quiver(&mut r, &sig, 3, 3));
        let dst = Arc::new(random_quiver(&mut r, &sig, 4, 4));
        let Some(sigma) = random_morphism(&mut r, &src, &dst, 2) else { continue };
        let f = image_factorize(&sigma).map_err(e)?;
        ensure!(f.pi.then(&f.iota).map_err(e)? == sigma, "σ ≠ ι∘π");
        ensure!(f.iota.is_var_to_var() && f.iota.is_mono_var(), "ι is not an injective renaming");
        ensure!(support_morphism(&f.pi).is_full(&f.middle), "π does not have full support");
        let covered: BTreeSet<Name> = f
            .pi
            .assignment()
            .iter()
            .flatten()
            .flat_map(|t| oracle_support(&f.middle, t))
            .collect();
        ensure!(covered.len() == f.middle.total_gens(), "π misses generators by direct recursion");
        let (m2, theta) = renamed(&f.middle);
        let other = ImageFactorization {
            pi: f.pi.then(&theta).map_err(e)?,
            middle: m2.clone(),
            iota: inverse_var(&theta).then(&f.iota).map_err(e)?,
        };
        let chi = compare_factorizations(&f, &other).map_err(e)?.ok_or("no comparison iso")?;
        let commuting: Vec<ComputadMorphism> = hom_var(&f.middle, &m2)
            .map_err(e)?
            .into_iter()
            .filter(|h| f.pi.then(h).ok() == Some(other.pi.clone()) && h.then(&other.iota).ok() == Some(f.iota.clone()))
            .collect();
        ensure!(commuting.len() == 1 && commuting[0] == chi, "{} comparison maps commute", commuting.len());
        done += 1;
    }
    let mut split = 0;
    while split < 50 {
        let c = Arc::new(random_quiver(&mut r, &sig, 4, 4));
        let base = c.base().clone();
        let o = base.sort_index("o").unwrap();
        let keep: BTreeSet<Name> = c.gens(o).iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
        let specs: Vec<GenSpec> = c
            .specs()
            .into_iter()
            .filter(|g| {
                keep.contains(&g.name) || (g.sort != o && g.gluing.iter().all(|(_, t)| keep.contains(t.as_var().unwrap())))
            })
            .collect();
        let m = Arc::new(Computad::new(sig.clone(), specs).map_err(e)?);
        let ident: BTreeMap<Name, Term> =
            (0..base.sort_count()).flat_map(|s| m.gens(s).iter().map(|g| (g.clone(), Term::Var(g.clone())))).collect();
        let incl = ComputadMorphism::from_names(m.clone(), c.clone(), &ident).map_err(e)?;
        let Some(ret) = random_morphism_fixing(&mut r, &c, &m, 2, &ident) else { continue };
        let idem = ret.then(&incl).map_err(e)?;
        ensure!(idem.then(&idem).map_err(e)? == idem, "constructed endomorphism is not idempotent");
        let s = split_idempotent(&idem).map_err(e)?;
        ensure!(s.retraction.then(&s.section).map_err(e)? == idem, "splitting does not recompose");
        ensure!(
            s.section.then(&s.retraction).map_err(e)? == ComputadMorphism::identity(s.object.clone()),
            "section then retraction is not the identity"
        );
        split += 1;
    }
    Ok(format!("{done} factorisations, {split} idempotents"))
}

fn representability() -> Outcome {
    let sig = comp_sig();
    let mut rep = Representer::new(sig.clone());
    let mut checked = 0;
    for (label, c) in comp_fixtures() {
        for s in 0..sig.base().sort_count() {
            let terms = enumerate_terms(&*c, s, 2).map_err(e)?;
            let shapes = enumerate_polyplexes(&sig, s, 2).map_err(e)?;
            for t in &terms {
                let p = classify(&c, t).map_err(e)?;
                ensure!(shapes.contains(&p), "{label}: shape of {t} was not enumerated");
            }
            for p in &shapes {
                let (rp, _) = rep.represent(p).map_err(e)?;
                let homs = hom_var(&rp, &c).map_err(e)?.len();
                let mut fibre = 0;
                for t in &terms {
                    fibre += (classify(&c, t).map_err(e)? == *p) as usize;
                }
                ensure!(homs == fibre, "{label}: {p} has {homs} maps but fibre {fibre}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} polyplexes"))
}

fn nerve_reconstruction() -> Outcome {
    let sig = comp_sig();
    let mut r = rng(8);
    let mut cs: Vec<Arc<Computad>> = (0..25).map(|_| Arc::new(random_quiver(&mut r, &sig, 4, 5))).collect();
    cs.extend((0..25).map(|_| Arc::new(random_kan1(&mut r))));
    for c in &cs {
        let n = nerve(c).map_err(e)?;
        let listed: usize = n.fibres.values().map(Vec::len).sum();
        ensure!(listed == c.total_gens(), "fibres do not partition the generators");
        let back = Arc::new(reconstruct(&n, c.signature_arc()).map_err(e)?);
        ensure!(is_isomorphic(&back, c), "reconstruction of {c:?} is not isomorphic");
    }
    Ok(format!("{} computads", cs.len()))
}

fn grid_figure() -> Outcome {
    let base = Arc::new(cube_category(2).map_err(e)?);
    let shapes: [&[usize]; 4] = [&[], &[0], &[1], &[0, 1]];
    let counts = |g: &Grid| -> std::result::Result<Vec<usize>, String> {
        let pos = grid_positions(&base, g).map_err(e)?;
        shapes.iter().map(|j| base.sort_index(&cube_sort(j)).map(|s| pos.cell_count(s)).map_err(e)).collect()
    };
    let fig = counts(&Grid::new(&[4, 1]))?;
    ensure!(fig == vec![10, 8, 5, 4], "grid (4,1) has counts {fig:?}");
    for (a, b) in [(1, 1), (2, 3), (0, 2), (3, 0)] {
        let got = counts(&Grid::new(&[a, b]))?;
        let want: Vec<usize> = shapes
            .iter()
            .map(|j| [a, b].iter().enumerate().map(|(d, &n)| if j.contains(&d) { n } else { n + 1 }).product())
            .collect();
        ensure!(got == want, "grid ({a},{b}) has counts {got:?}, expected {want:?}");
    }
    Ok(format!("{fig:?}"))
}

/// Terms by the fixed-point description: generators, plus `f[τ]` for each
/// arity family `τ` of smaller terms whose faces match the arity's action.
struct FixedPoint<'a> {
    c: &'a Computad,
    levels: Vec<Vec<Vec<Term>>>,
}

impl<'a> FixedPoint<'a> {
    fn sort(&self, t: &Term) -> usize {
        match t {
            Term::Var(g) => self.c.gen_index(g).unwrap().0,
            Term::App(f, _) => self.c.signature().symbol(f).unwrap().sort,
        }
    }

    fn face(&self, f: usize, t: &Term) -> Term {
        let base = self.c.base();
        let pos = base.face_position(f);
        match t {
            Term::Var(g) => {
                let (s, k) = self.c.gen_index(g).unwrap();
                self.c.gluing_family(s, k)[pos].clone()
            }
            Term::App(sym, args) => {
                let sym = self.c.signature().symbol(sym).unwrap();
                let arity = sym.arity();
                sym.boundary()[pos]
                    .bind(&mut |cell: &Name| {
                        let (s, k) = arity.cell_index(cell).unwrap();
                        Ok::<_, ()>(args[arity.flat(s, k)].clone())
                    })
                    .unwrap()
            }
        }
    }

    fn new(c: &'a Computad, depth: usize) -> FixedPoint<'a> {
        let n = c.base().sort_count();
        let mut me = FixedPoint { c, levels: vec![(0..n).map(|s| c.gens(s).iter().cloned().map(Term::Var).collect()).collect()] };
        for _ in 0..depth {
            let prev = me.levels.last().unwrap().clone();
            let mut next: Vec<Vec<Term>> = (0..n).map(|s| c.gens(s).iter().cloned().map(Term::Var).collect()).collect();
            for sym in c.signature().symbols() {
                let arity = sym.arity().clone();
                let mut tau: Vec<Term> = Vec::new();
                me.fill(&arity, &prev, &mut tau, &mut |tau| next[sym.sort].push(Term::app(sym.id.clone(), tau.to_vec())));
            }
            me.levels.push(next);
        }
        me
    }

    /// Every choice per arity cell in flat order, keeping those whose faces
    /// agree with the action.
    fn fill(&self, arity: &Presheaf, prev: &[Vec<Term>], tau: &mut Vec<Term>, emit: &mut dyn FnMut(&[Term])) {
        if tau.len() == arity.total() {
            for n in 0..arity.total() {
                let (s, k) = arity.unflat(n);
                for &f in arity.base().faces_into(s) {
                    let low = arity.flat(arity.base().face(f).src, arity.act(f, k));
                    if self.face(f, &tau[n]) != tau[low] {
                        return;
                    }
                }
            }
            emit(tau);
            return;
        }
        let (s, _) = arity.unflat(tau.len());
        for t in &prev[s] {
            debug_assert_eq!(self.sort(t), s);
            tau.push(t.clone());
            self.fill(arity, prev, tau, emit);
            tau.pop();
        }
    }
}

fn kan_pack() -> Outcome {
    let start = Instant::now();
    let k2 = sigma_kan(2).map_err(e)?;
    let again = validate_signature(&k2.to_raw()).map_err(e)?;
    ensure!(again.symbols().len() == k2.symbols().len(), "round trip lost symbols");
    let c = kan_simplex(2, 1);
    let oracle = FixedPoint::new(&c, 2);
    let mut table = Vec::new();
    for m in 0..2 {
        let s = c.base().sort_index(&simplex_sort(m)).map_err(e)?;
        for d in 0..=2 {
            let ours: BTreeSet<Term> = enumerate_terms(&*c, s, d).map_err(e)?.into_iter().collect();
            let theirs: BTreeSet<Term> = oracle.levels[d][s].iter().cloned().collect();
            ensure!(theirs.len() == oracle.levels[d][s].len(), "oracle produced duplicates");
            ensure!(ours == theirs, "[{m}] at depth {d}: {} terms, oracle {}", ours.len(), theirs.len());
            table.push(format!("[{m}]@{d}={}", ours.len()));
        }
    }
    within(start, 120)?;
    Ok(table.join(" "))
}

fn cofibrant_replacement() -> Outcome {
    let z = z5_group();
    let und = underlying_computad(&z, 1).map_err(e)?;
    ensure!(und.exact, "Und of Z5 should be exact");
    let rr = und.counit(&z).map_err(e)?;
    let cof = FreeAlgebra::new(und.computad.clone(), 1).map_err(e)?;
    let sigma = |_: usize, t: &Term| rr.eval(&z, t);
    let sorts: Vec<usize> = (0..z.signature().base().sort_count()).collect();
    if let Some(cex) = check_trivial_fibration(&cof, &z, &sigma, &sorts).map_err(e)? {
        return Err(format!("r is not a trivial fibration: {cex:?}"));
    }
    let gsig = Arc::new(group_signature());
    let star = gsig.base().sort_index("*").map_err(e)?;
    let mut r = rng(11);
    let mut counts = Vec::new();
    for _ in 0..20 {
        let n = r.gen_range(0..=4);
        let specs = (0..n).map(|k| GenSpec { name: name(&format!("c{k}")), sort: star, gluing: vec![] }).collect();
        let c = Arc::new(Computad::new(gsig.clone(), specs).map_err(e)?);
        let left = hom_var(&c, &und.computad).map_err(e)?.len();
        let right = adjunction_right(&c, &z)?;
        ensure!(left == right, "{n} generators: {left} maps into Und, {right} algebra maps");
        counts.push(left);
    }
    let p = pathcat();
    let und_p = underlying_computad(&p, 2).map_err(e)?;
    let sig = comp_sig();
    for _ in 0..10 {
        let c = Arc::new(random_quiver(&mut r, &sig, 3, 3));
        let left = hom_var(&c, &und_p.computad).map_err(e)?.len();
        let right = adjunction_right(&c, &p)?;
        ensure!(left == right, "PATHCAT: {left} maps into Und, {right} algebra maps");
    }
    Ok(format!("counts {counts:?}"))
}

/// `|Hom(Free C, A)|`: generator assignments accepted as algebra maps.
fn adjunction_right(c: &Arc<Computad>, a: &Algebra) -> std::result::Result<usize, String> {
    let gens: Vec<(usize, usize)> =
        c.base().sorts_by_dim().iter().flat_map(|&s| (0..c.gen_count(s)).map(move |k| (s, k))).collect();
    let sizes: Vec<usize> = gens.iter().map(|&(s, _)| a.carrier().cell_count(s)).collect();
    if sizes.contains(&0) {
        return Ok(0);
    }
    let mut choice = vec![0usize; gens.len()];
    let mut count = 0;
    loop {
        let mut values: Vec<Vec<usize>> = (0..c.base().sort_count()).map(|s| vec![0; c.gen_count(s)]).collect();
        for (n, &(s, k)) in gens.iter().enumerate() {
            values[s][k] = choice[n];
        }
        count += morphism_from_generators(c, a, values).is_ok() as usize;
        let mut n = 0;
        loop {
            if n == choice.len() {
                return Ok(count);
            }
            choice[n] += 1;
            if choice[n] < sizes[n] {
                break;
            }
            choice[n] = 0;
            n += 1;
        }
    }
}

fn filtration_replay() -> Outcome {
    let mut r = rng(12);
    let sig = comp_sig();
    let mut cs: Vec<(String, Arc<Computad>)> = comp_fixtures().into_iter().map(|(l, c)| (l.to_string(), c)).collect();
    cs.extend(kan_fixtures().into_iter().map(|(l, c)| (l.to_string(), c)));
    cs.extend((0..10).map(|k| (format!("random Kan(1) #{k}"), Arc::new(random_kan1(&mut r)))));
    cs.extend((0..10).map(|k| (format!("random quiver #{k}"), Arc::new(random_quiver(&mut r, &sig, 4, 5)))));
    let mut pushouts = 0;
    for (label, c) in &cs {
        let f = skeletal_filtration(c).map_err(e)?;
        let rp = replay(&f).map_err(e)?;
        ensure!(rp.stages_match.iter().all(|&b| b), "{label}: a stage differs");
        ensure!(!rp.pushouts_match.contains(&Some(false)), "{label}: a pushout differs");
        pushouts += rp.pushouts_match.iter().flatten().count();
        ensure!(is_isomorphic(&rp.result, c), "{label}: replay is not isomorphic");
    }
    Ok(format!("{} computads, {pushouts} pushouts computed", cs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("boundary functoriality", functoriality),
        ("monad laws", monad_laws),
        ("cartesian unit", cartesian_unit),
        ("free algebra universal property", universal_property),
        ("support lemma", support_lemma),
        ("image factorisation", factorisation),
        ("polyplex representability", representability),
        ("nerve reconstruction", nerve_reconstruction),
        ("grid positions", grid_figure),
        ("Kan pack", kan_pack),
        ("cofibrant replacement", cofibrant_replacement),
        ("skeletal filtration replay", filtration_replay),
    ];
    let mut failed = 0;
    for (k, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS {:>2} {label} ({note}; {t:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {label}: {why} ({t:.2}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
