//! Depth-bounded term enumeration.
//!
//! Level `k` at a sort holds every term of depth at most `k`: the variables
//! together with `f[τ]` for every compatible family `τ` with values in level
//! `k - 1`. Families are natural maps out of the arity, found by the generic
//! hom search against the boundary action restricted to the previous level.

use crate::error::Result;
use crate::par::{self, Exec};
use crate::presheaf::{enumerate_maps, CellTable};
use crate::term::{boundary, FiniteContext, Term};

#[derive(Clone)]
pub struct TermLevels<G> {
    /// `levels[k][sort]`, each sorted and duplicate free.
    levels: Vec<Vec<Vec<Term<G>>>>,
}

impl<G: Clone + Ord> TermLevels<G> {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn at(&self, k: usize, sort: usize) -> &[Term<G>] {
        &self.levels[k][sort]
    }

    pub fn top(&self, sort: usize) -> &[Term<G>] {
        &self.levels[self.depth()][sort]
    }

    /// True when the last two levels agree at the given sorts, in which case
    /// no term of those sorts has larger depth.
    pub fn saturated(&self, sorts: &[usize]) -> bool {
        let d = self.depth();
        d > 0 && sorts.iter().all(|&s| self.levels[d][s] == self.levels[d - 1][s])
    }

    pub fn contains(&self, sort: usize, t: &Term<G>) -> bool {
        self.top(sort).binary_search(t).is_ok()
    }
}

/// The boundary action on a set of terms, with `None` where a face leaves it.
pub fn level_table<C>(ctx: &C, level: &[Vec<Term<C::Gen>>]) -> Result<CellTable>
where
    C: FiniteContext + ?Sized,
{
    let base = ctx.signature().base();
    let action = base
        .faces()
        .iter()
        .enumerate()
        .map(|(f, fi)| {
            level[fi.dst]
                .iter()
                .map(|t| Ok(level[fi.src].binary_search(&boundary(ctx, f, t)?).ok()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CellTable { counts: level.iter().map(Vec::len).collect(), action })
}

fn next_level<C>(ctx: &C, prev: &[Vec<Term<C::Gen>>], exec: Exec) -> Result<Vec<Vec<Term<C::Gen>>>>
where
    C: FiniteContext + Sync + ?Sized,
    C::Gen: Send + Sync,
{
    let table = level_table(ctx, prev)?;
    let sig = ctx.signature();
    let apps = par::map(exec, sig.symbols().iter().collect(), |f| {
        let arity = f.arity();
        let terms: Vec<Term<C::Gen>> = enumerate_maps(arity, &table, exec)
            .into_iter()
            .map(|vals| {
                let args: Vec<Term<C::Gen>> =
                    vals.iter().enumerate().map(|(n, &v)| prev[arity.unflat(n).0][v].clone()).collect();
                Term::App(f.id.clone(), args.into())
            })
            .collect();
        (f.sort, terms)
    });
    let mut out: Vec<Vec<Term<C::Gen>>> =
        (0..sig.base().sort_count()).map(|s| ctx.generators(s).into_iter().map(Term::Var).collect()).collect();
    for (s, terms) in apps {
        out[s].extend(terms);
    }
    Ok(par::map(exec, out, |mut level| {
        level.sort();
        level.dedup();
        level
    }))
}

pub fn term_levels<C>(ctx: &C, depth: usize) -> Result<TermLevels<C::Gen>>
where
    C: FiniteContext + Sync + ?Sized,
    C::Gen: Send + Sync,
{
    term_levels_with(Exec::default(), ctx, depth)
}

pub fn term_levels_with<C>(exec: Exec, ctx: &C, depth: usize) -> Result<TermLevels<C::Gen>>
where
    C: FiniteContext + Sync + ?Sized,
    C::Gen: Send + Sync,
{
    let n = ctx.signature().base().sort_count();
    let mut first: Vec<Vec<Term<C::Gen>>> =
        (0..n).map(|s| ctx.generators(s).into_iter().map(Term::Var).collect()).collect();
    for l in &mut first {
        l.sort();
    }
    let mut levels = vec![first];
    for _ in 0..depth {
        let next = next_level(ctx, levels.last().expect("nonempty"), exec)?;
        levels.push(next);
    }
    Ok(TermLevels { levels })
}

/// Every term of the sort with depth at most `depth`, ordered by depth and
/// then structurally.
pub fn enumerate_terms<C>(ctx: &C, sort: usize, depth: usize) -> Result<Vec<Term<C::Gen>>>
where
    C: FiniteContext + Sync + ?Sized,
    C::Gen: Send + Sync,
{
    enumerate_terms_with(Exec::default(), ctx, sort, depth)
}

pub fn enumerate_terms_with<C>(exec: Exec, ctx: &C, sort: usize, depth: usize) -> Result<Vec<Term<C::Gen>>>
where
    C: FiniteContext + Sync + ?Sized,
    C::Gen: Send + Sync,
{
    let mut terms = term_levels_with(exec, ctx, depth)?.top(sort).to_vec();
    terms.sort_by_cached_key(|t| t.depth());
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::computad::Computad;
    use crate::fixtures::{comp_uv, sigma_comp, walk2};
    use std::sync::Arc;

    #[test]
    fn walk2_arrows() {
        let w = walk2();
        let a = w.base().sort_index("a").unwrap();
        assert_eq!(enumerate_terms(&w, a, 0).unwrap().len(), 2);
        let d1 = enumerate_terms(&w, a, 1).unwrap();
        assert_eq!(d1.len(), 3);
        assert_eq!(d1[2], comp_uv());
        // composites never compose further: the chain has length two
        assert_eq!(enumerate_terms(&w, a, 4).unwrap().len(), 3);
    }

    #[test]
    fn empty_computad_has_no_terms() {
        let c = Computad::empty(Arc::new(sigma_comp()));
        for s in 0..2 {
            assert!(enumerate_terms(&c, s, 3).unwrap().is_empty());
        }
    }

    #[test]
    fn strategies_agree() {
        let w = walk2();
        let a = term_levels_with(Exec::Sequential, &w, 3).unwrap();
        let b = term_levels_with(Exec::Parallel, &w, 3).unwrap();
        assert_eq!(a.levels, b.levels);
        assert!(a.saturated(&[0, 1]));
    }
}
