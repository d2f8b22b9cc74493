//! Independent oracle over finite categories and profunctors.
//!
//! Everything in this module is deliberately self-contained: plain tables,
//! breadth-first closures and backtracking searches, with no use of the
//! span/matrix machinery or the module pipeline. Results computed here are
//! compared against the main pipeline elsewhere; agreement is meaningful
//! precisely because the two sides share no code.

use crate::error::{CkError, Result};

/// A finite category presented by explicit tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    pub name: String,
    pub n_objects: usize,
    /// source object of each morphism
    pub mor_src: Vec<usize>,
    /// target object of each morphism
    pub mor_dst: Vec<usize>,
    /// identity morphism of each object
    pub identity: Vec<usize>,
    /// `comp[g][f] = Some(g∘f)` ("g after f") iff `dst(f) == src(g)`
    pub comp: Vec<Vec<Option<usize>>>,
}

impl FinCategory {
    pub fn new(
        name: impl Into<String>,
        n_objects: usize,
        mor_src: Vec<usize>,
        mor_dst: Vec<usize>,
        identity: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<FinCategory> {
        let c = FinCategory { name: name.into(), n_objects, mor_src, mor_dst, identity, comp };
        c.validate()?;
        Ok(c)
    }

    pub fn n_morphisms(&self) -> usize {
        self.mor_src.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_morphisms();
        if self.mor_dst.len() != n {
            return Err(CkError::structural("mor_src/mor_dst length mismatch"));
        }
        if self.mor_src.iter().chain(self.mor_dst.iter()).any(|&o| o >= self.n_objects) {
            return Err(CkError::structural("morphism endpoint out of range"));
        }
        if self.identity.len() != self.n_objects {
            return Err(CkError::structural("one identity per object required"));
        }
        for (x, &i) in self.identity.iter().enumerate() {
            if i >= n || self.mor_src[i] != x || self.mor_dst[i] != x {
                return Err(CkError::structural(format!("identity of object {x} is not an endomorphism")));
            }
        }
        if self.comp.len() != n || self.comp.iter().any(|row| row.len() != n) {
            return Err(CkError::structural("composition table must be n×n"));
        }
        for g in 0..n {
            for f in 0..n {
                let composable = self.mor_dst[f] == self.mor_src[g];
                match self.comp[g][f] {
                    Some(gf) => {
                        if !composable {
                            return Err(CkError::structural(format!(
                                "comp[{g}][{f}] defined on a non-composable pair"
                            )));
                        }
                        if gf >= n
                            || self.mor_src[gf] != self.mor_src[f]
                            || self.mor_dst[gf] != self.mor_dst[g]
                        {
                            return Err(CkError::structural(format!(
                                "comp[{g}][{f}] has wrong boundary"
                            )));
                        }
                    }
                    None => {
                        if composable {
                            return Err(CkError::structural(format!(
                                "comp[{g}][{f}] missing on a composable pair"
                            )));
                        }
                    }
                }
            }
        }
        for f in 0..n {
            if self.comp[f][self.identity[self.mor_src[f]]] != Some(f)
                || self.comp[self.identity[self.mor_dst[f]]][f] != Some(f)
            {
                return Err(CkError::structural(format!("identity laws fail at morphism {f}")));
            }
        }
        for h in 0..n {
            for g in 0..n {
                if self.mor_dst[g] != self.mor_src[h] {
                    continue;
                }
                let hg = self.comp[h][g].unwrap();
                for f in 0..n {
                    if self.mor_dst[f] != self.mor_src[g] {
                        continue;
                    }
                    let gf = self.comp[g][f].unwrap();
                    if self.comp[hg][f] != self.comp[h][gf] {
                        return Err(CkError::structural(format!(
                            "associativity fails at ({h},{g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    /// Morphisms `u → x`, ascending.
    pub fn hom_set(&self, u: usize, x: usize) -> Vec<usize> {
        (0..self.n_morphisms())
            .filter(|&m| self.mor_src[m] == u && self.mor_dst[m] == x)
            .collect()
    }

    /// The discrete category on `n` objects.
    pub fn discrete(n: usize) -> FinCategory {
        FinCategory {
            name: format!("discrete{n}"),
            n_objects: n,
            mor_src: (0..n).collect(),
            mor_dst: (0..n).collect(),
            identity: (0..n).collect(),
            comp: (0..n)
                .map(|g| (0..n).map(|f| if f == g { Some(f) } else { None }).collect())
                .collect(),
        }
    }

    /// The walking arrow `0 → 1` (morphisms: id0, id1, u).
    pub fn walking_arrow() -> FinCategory {
        FinCategory::new(
            "walking-arrow",
            2,
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![0, 1],
            vec![
                vec![Some(0), None, None],
                vec![None, Some(1), Some(2)],
                vec![Some(2), None, None],
            ],
        )
        .expect("walking arrow is a category")
    }

    /// Category of a finite preorder: one morphism `u → x` whenever
    /// `le[u][x]`; `le` must be reflexive and transitive.
    pub fn from_preorder(name: impl Into<String>, le: &[Vec<bool>]) -> Result<FinCategory> {
        let n = le.len();
        let mut mor_src = Vec::new();
        let mut mor_dst = Vec::new();
        let mut index = vec![vec![None; n]; n];
        for u in 0..n {
            if le[u].len() != n {
                return Err(CkError::structural("preorder table must be square"));
            }
            for x in 0..n {
                if le[u][x] {
                    index[u][x] = Some(mor_src.len());
                    mor_src.push(u);
                    mor_dst.push(x);
                }
            }
        }
        let identity = (0..n)
            .map(|x| index[x][x].ok_or_else(|| CkError::structural("preorder not reflexive")))
            .collect::<Result<Vec<_>>>()?;
        let m = mor_src.len();
        let mut comp = vec![vec![None; m]; m];
        for (g, row) in comp.iter_mut().enumerate() {
            for (f, slot) in row.iter_mut().enumerate() {
                if mor_dst[f] == mor_src[g] {
                    *slot = Some(index[mor_src[f]][mor_dst[g]].ok_or_else(|| {
                        CkError::structural("preorder not transitive")
                    })?);
                }
            }
        }
        FinCategory::new(name, n, mor_src, mor_dst, identity, comp)
    }

    /// One-object category from a monoid multiplication table
    /// (`table[g][f] = g∘f`, unit element `e`).
    pub fn from_monoid(name: impl Into<String>, table: &[Vec<usize>], e: usize) -> Result<FinCategory> {
        let m = table.len();
        let comp = table
            .iter()
            .map(|row| row.iter().map(|&v| Some(v)).collect())
            .collect();
        FinCategory::new(name, 1, vec![0; m], vec![0; m], vec![e], comp)
    }
}

/// A functor between finite categories, presented by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub ob: Vec<usize>,
    pub mor: Vec<usize>,
}

impl FinFunctor {
    pub fn validate(&self, k: &FinCategory, l: &FinCategory) -> Result<()> {
        if self.ob.len() != k.n_objects || self.mor.len() != k.n_morphisms() {
            return Err(CkError::structural("functor table sizes mismatch"));
        }
        if self.ob.iter().any(|&o| o >= l.n_objects) || self.mor.iter().any(|&m| m >= l.n_morphisms()) {
            return Err(CkError::structural("functor image out of range"));
        }
        for f in 0..k.n_morphisms() {
            if l.mor_src[self.mor[f]] != self.ob[k.mor_src[f]]
                || l.mor_dst[self.mor[f]] != self.ob[k.mor_dst[f]]
            {
                return Err(CkError::structural(format!("functor breaks boundaries at {f}")));
            }
        }
        for (x, &i) in k.identity.iter().enumerate() {
            if self.mor[i] != l.identity[self.ob[x]] {
                return Err(CkError::structural(format!("functor breaks identity at {x}")));
            }
        }
        for g in 0..k.n_morphisms() {
            for f in 0..k.n_morphisms() {
                if let Some(gf) = k.comp[g][f] {
                    if l.comp[self.mor[g]][self.mor[f]] != Some(self.mor[gf]) {
                        return Err(CkError::structural(format!(
                            "functor breaks composition at ({g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(k: &FinCategory, second: &FinFunctor, first: &FinFunctor) -> FinFunctor {
        let _ = k;
        FinFunctor {
            ob: first.ob.iter().map(|&o| second.ob[o]).collect(),
            mor: first.mor.iter().map(|&m| second.mor[m]).collect(),
        }
    }

    pub fn identity(k: &FinCategory) -> FinFunctor {
        FinFunctor { ob: (0..k.n_objects).collect(), mor: (0..k.n_morphisms()).collect() }
    }
}

/// All functors `K → L`, by backtracking over object images and morphism
/// images with boundary and functoriality pruning. Deterministic order.
pub fn enumerate_finfunctors(k: &FinCategory, l: &FinCategory, cap: usize) -> Result<Vec<FinFunctor>> {
    let mut out = Vec::new();
    let mut ob = vec![0usize; k.n_objects];
    let mut steps = 0usize;
    enumerate_ob_maps(k, l, &mut ob, 0, &mut out, &mut steps, cap)?;
    Ok(out)
}

fn enumerate_ob_maps(
    k: &FinCategory,
    l: &FinCategory,
    ob: &mut Vec<usize>,
    at: usize,
    out: &mut Vec<FinFunctor>,
    steps: &mut usize,
    cap: usize,
) -> Result<()> {
    if at == k.n_objects {
        let mut mor = vec![usize::MAX; k.n_morphisms()];
        for (x, &i) in k.identity.iter().enumerate() {
            mor[i] = l.identity[ob[x]];
        }
        return assign_mors(k, l, ob, &mut mor, 0, out, steps, cap);
    }
    if k.n_objects > 0 && l.n_objects == 0 {
        return Ok(());
    }
    for img in 0..l.n_objects {
        ob[at] = img;
        enumerate_ob_maps(k, l, ob, at + 1, out, steps, cap)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn assign_mors(
    k: &FinCategory,
    l: &FinCategory,
    ob: &[usize],
    mor: &mut Vec<usize>,
    at: usize,
    out: &mut Vec<FinFunctor>,
    steps: &mut usize,
    cap: usize,
) -> Result<()> {
    // advance past already-forced slots (identities)
    let mut at = at;
    while at < mor.len() && mor[at] != usize::MAX {
        at += 1;
    }
    if at == mor.len() {
        let cand = FinFunctor { ob: ob.to_vec(), mor: mor.clone() };
        if cand.validate(k, l).is_ok() {
            out.push(cand);
        }
        return Ok(());
    }
    for img in 0..l.n_morphisms() {
        *steps += 1;
        if *steps > cap {
            return Err(CkError::Budget("functor enumeration budget exhausted".into()));
        }
        if l.mor_src[img] != ob[k.mor_src[at]] || l.mor_dst[img] != ob[k.mor_dst[at]] {
            continue;
        }
        mor[at] = img;
        // prune: any fully-assigned composable pair must already commute
        let mut ok = true;
        'outer: for g in 0..mor.len() {
            if mor[g] == usize::MAX {
                continue;
            }
            for f in 0..mor.len() {
                if mor[f] == usize::MAX {
                    continue;
                }
                if let Some(gf) = k.comp[g][f] {
                    if mor[gf] != usize::MAX && l.comp[mor[g]][mor[f]] != Some(mor[gf]) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            assign_mors(k, l, ob, mor, at + 1, out, steps, cap)?;
        }
        mor[at] = usize::MAX;
    }
    Ok(())
}

/// A natural transformation `F ⇒ G` between functors `K → L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransf {
    pub comp: Vec<usize>,
}

impl NatTransf {
    pub fn validate(
        &self,
        k: &FinCategory,
        l: &FinCategory,
        f: &FinFunctor,
        g: &FinFunctor,
    ) -> Result<()> {
        if self.comp.len() != k.n_objects {
            return Err(CkError::structural("one component per object required"));
        }
        for (x, &m) in self.comp.iter().enumerate() {
            if m >= l.n_morphisms() || l.mor_src[m] != f.ob[x] || l.mor_dst[m] != g.ob[x] {
                return Err(CkError::structural(format!("component at {x} has wrong boundary")));
            }
        }
        for a in 0..k.n_morphisms() {
            let (u, x) = (k.mor_src[a], k.mor_dst[a]);
            if l.comp[g.mor[a]][self.comp[u]] != l.comp[self.comp[x]][f.mor[a]] {
                return Err(CkError::structural(format!("naturality fails at morphism {a}")));
            }
        }
        Ok(())
    }
}

/// All natural transformations `F ⇒ G`.
pub fn enumerate_nats(
    k: &FinCategory,
    l: &FinCategory,
    f: &FinFunctor,
    g: &FinFunctor,
) -> Vec<NatTransf> {
    let cands: Vec<Vec<usize>> =
        (0..k.n_objects).map(|x| l.hom_set(f.ob[x], g.ob[x])).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; k.n_objects];
    fill_nat(k, l, f, g, &cands, &mut cur, 0, &mut out);
    out
}

fn fill_nat(
    k: &FinCategory,
    l: &FinCategory,
    f: &FinFunctor,
    g: &FinFunctor,
    cands: &[Vec<usize>],
    cur: &mut Vec<usize>,
    at: usize,
    out: &mut Vec<NatTransf>,
) {
    if at == k.n_objects {
        let t = NatTransf { comp: cur.clone() };
        if t.validate(k, l, f, g).is_ok() {
            out.push(t);
        }
        return;
    }
    for &m in &cands[at] {
        cur[at] = m;
        fill_nat(k, l, f, g, cands, cur, at + 1, out);
    }
}

/// A profunctor `K ⇸ L`, i.e. a functor `K × L^op → Set`, presented by an
/// element table. An element anchored at `(u ∈ L, x ∈ K)` reads as a
/// heteromorphism `u → x`; the right action postcomposes with K-morphisms
/// (covariant), the left action precomposes with L-morphisms (contravariant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    pub name: String,
    pub src: FinCategory,
    pub dst: FinCategory,
    /// anchor in `src` (the K-side, target of the heteromorphism)
    pub el_k: Vec<usize>,
    /// anchor in `dst` (the L-side, source of the heteromorphism)
    pub el_l: Vec<usize>,
    /// `ract[e][f] = Some(e·f)` for K-morphisms `f : el_k[e] → y`
    pub ract: Vec<Vec<Option<usize>>>,
    /// `lact[e][g] = Some(g·e)` for L-morphisms `g : v → el_l[e]`
    pub lact: Vec<Vec<Option<usize>>>,
}

impl Profunctor {
    pub fn n_elements(&self) -> usize {
        self.el_k.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_elements();
        let (nk, nl) = (self.src.n_morphisms(), self.dst.n_morphisms());
        if self.el_l.len() != n || self.ract.len() != n || self.lact.len() != n {
            return Err(CkError::structural("profunctor table sizes mismatch"));
        }
        if self.el_k.iter().any(|&x| x >= self.src.n_objects)
            || self.el_l.iter().any(|&u| u >= self.dst.n_objects)
        {
            return Err(CkError::structural("element anchor out of range"));
        }
        for e in 0..n {
            if self.ract[e].len() != nk || self.lact[e].len() != nl {
                return Err(CkError::structural("action row sizes mismatch"));
            }
            for f in 0..nk {
                let applies = self.src.mor_src[f] == self.el_k[e];
                match self.ract[e][f] {
                    Some(e2) => {
                        if !applies
                            || e2 >= n
                            || self.el_k[e2] != self.src.mor_dst[f]
                            || self.el_l[e2] != self.el_l[e]
                        {
                            return Err(CkError::structural(format!(
                                "right action invalid at element {e}, morphism {f}"
                            )));
                        }
                    }
                    None => {
                        if applies {
                            return Err(CkError::structural(format!(
                                "right action missing at element {e}, morphism {f}"
                            )));
                        }
                    }
                }
            }
            for g in 0..nl {
                let applies = self.dst.mor_dst[g] == self.el_l[e];
                match self.lact[e][g] {
                    Some(e2) => {
                        if !applies
                            || e2 >= n
                            || self.el_l[e2] != self.dst.mor_src[g]
                            || self.el_k[e2] != self.el_k[e]
                        {
                            return Err(CkError::structural(format!(
                                "left action invalid at element {e}, morphism {g}"
                            )));
                        }
                    }
                    None => {
                        if applies {
                            return Err(CkError::structural(format!(
                                "left action missing at element {e}, morphism {g}"
                            )));
                        }
                    }
                }
            }
            // unit actions
            if self.ract[e][self.src.identity[self.el_k[e]]] != Some(e)
                || self.lact[e][self.dst.identity[self.el_l[e]]] != Some(e)
            {
                return Err(CkError::structural(format!("unit action moves element {e}")));
            }
        }
        // functoriality of both actions and their commutation
        for e in 0..n {
            for f1 in 0..nk {
                let Some(e1) = self.ract[e][f1] else { continue };
                for f2 in 0..nk {
                    if let Some(f21) = self.src.comp[f2][f1] {
                        if self.ract[e1][f2] != self.ract[e][f21] {
                            return Err(CkError::structural(format!(
                                "right action not functorial at element {e}"
                            )));
                        }
                    }
                }
            }
            for g1 in 0..nl {
                let Some(e1) = self.lact[e][g1] else { continue };
                for g2 in 0..nl {
                    if let Some(g12) = self.dst.comp[g1][g2] {
                        if self.lact[e1][g2] != self.lact[e][g12] {
                            return Err(CkError::structural(format!(
                                "left action not functorial at element {e}"
                            )));
                        }
                    }
                }
            }
            for f in 0..nk {
                let Some(ef) = self.ract[e][f] else { continue };
                for g in 0..nl {
                    let Some(ge) = self.lact[e][g] else { continue };
                    if self.lact[ef][g] != self.ract[ge][f] {
                        return Err(CkError::structural(format!(
                            "actions do not commute at element {e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Elements anchored at `(u ∈ L, x ∈ K)`, ascending.
    pub fn component(&self, u: usize, x: usize) -> Vec<usize> {
        (0..self.n_elements())
            .filter(|&e| self.el_l[e] == u && self.el_k[e] == x)
            .collect()
    }
}

/// The identity profunctor `K ⇸ K`: elements are the morphisms of `K`.
pub fn prof_id(k: &FinCategory) -> Profunctor {
    let n = k.n_morphisms();
    let mut ract = vec![vec![None; n]; n];
    let mut lact = vec![vec![None; n]; n];
    for e in 0..n {
        for f in 0..n {
            if k.mor_src[f] == k.mor_dst[e] {
                ract[e][f] = k.comp[f][e];
            }
            if k.mor_dst[f] == k.mor_src[e] {
                lact[e][f] = k.comp[e][f];
            }
        }
    }
    Profunctor {
        name: format!("id({})", k.name),
        src: k.clone(),
        dst: k.clone(),
        el_k: k.mor_dst.clone(),
        el_l: k.mor_src.clone(),
        ract,
        lact,
    }
}

/// The representable profunctor of a functor `D : K → L`: elements at
/// `(u, x)` are the L-morphisms `u → D(x)`.
pub fn representable_prof(k: &FinCategory, l: &FinCategory, d: &FinFunctor) -> Profunctor {
    let n = l.n_morphisms();
    // elements: all L-morphisms m whose target is in the image of D, tagged
    // by the K-object x; one element per (m, x) with dst(m) == D(x).
    let mut el_m = Vec::new();
    let mut el_x = Vec::new();
    for m in 0..n {
        for x in 0..k.n_objects {
            if l.mor_dst[m] == d.ob[x] {
                el_m.push(m);
                el_x.push(x);
            }
        }
    }
    let count = el_m.len();
    let index = |m: usize, x: usize| -> usize {
        el_m.iter().zip(el_x.iter()).position(|(&a, &b)| a == m && b == x).unwrap()
    };
    let mut ract = vec![vec![None; k.n_morphisms()]; count];
    let mut lact = vec![vec![None; n]; count];
    for e in 0..count {
        for f in 0..k.n_morphisms() {
            if k.mor_src[f] == el_x[e] {
                let m2 = l.comp[d.mor[f]][el_m[e]].unwrap();
                ract[e][f] = Some(index(m2, k.mor_dst[f]));
            }
        }
        for g in 0..n {
            if l.mor_dst[g] == l.mor_src[el_m[e]] {
                let m2 = l.comp[el_m[e]][g].unwrap();
                lact[e][g] = Some(index(m2, el_x[e]));
            }
        }
    }
    Profunctor {
        name: "representable".into(),
        src: k.clone(),
        dst: l.clone(),
        el_k: el_x,
        el_l: el_m.iter().map(|&m| l.mor_src[m]).collect(),
        ract,
        lact,
    }
}

/// Composite profunctor `T∘S : A ⇸ C` for `S : A ⇸ B`, `T : B ⇸ C`,
/// computed as a coend: pairs `(t, s)` with matching middle anchor,
/// quotiented by `(t·b, s) ~ (t, b·s)` via breadth-first closure.
pub fn prof_compose(t: &Profunctor, s: &Profunctor) -> Result<Profunctor> {
    if s.dst != t.src {
        return Err(CkError::boundary("prof_compose: middle categories differ"));
    }
    let b_cat = &t.src;
    // composable pairs, t-major lexicographic
    let mut pairs = Vec::new();
    for te in 0..t.n_elements() {
        for se in 0..s.n_elements() {
            if t.el_k[te] == s.el_l[se] {
                pairs.push((te, se));
            }
        }
    }
    let pair_idx = |p: (usize, usize)| -> Option<usize> { pairs.binary_search(&p).ok() };
    // adjacency via the coend relation
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (i, &(te, se)) in pairs.iter().enumerate() {
        for b in 0..b_cat.n_morphisms() {
            // b : x → y with x = el_k[te]
            if b_cat.mor_src[b] == t.el_k[te] {
                let te2 = t.ract[te][b].unwrap();
                // need s-element anchored at middle y equal to se? No: the
                // relation pairs (t·b, s0) with (t, b·s0); here we view the
                // current pair as the right-hand side (t, b·s0): find s0
                // with lact[s0][b] == se.
                for s0 in 0..s.n_elements() {
                    if s.lact[s0][b] == Some(se) {
                        if let Some(j) = pair_idx((te2, s0)) {
                            adj[i].push(j);
                            adj[j].push(i);
                        }
                    }
                }
            }
        }
    }
    // breadth-first connected components, classes ordered by least pair
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut n_classes = 0usize;
    for start in 0..pairs.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let c = n_classes;
        n_classes += 1;
        let mut queue = std::collections::VecDeque::from([start]);
        class_of[start] = c;
        while let Some(p) = queue.pop_front() {
            for &q in &adj[p] {
                if class_of[q] == usize::MAX {
                    class_of[q] = c;
                    queue.push_back(q);
                }
            }
        }
    }
    let mut reps = vec![usize::MAX; n_classes];
    for (p, &c) in class_of.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = p;
        }
    }
    let el_k: Vec<usize> = reps.iter().map(|&p| s.el_k[pairs[p].1]).collect();
    let el_l: Vec<usize> = reps.iter().map(|&p| t.el_l[pairs[p].0]).collect();
    // induced actions: act on any member, verify all members agree
    let mut ract = vec![vec![None; s.src.n_morphisms()]; n_classes];
    let mut lact = vec![vec![None; t.dst.n_morphisms()]; n_classes];
    for c in 0..n_classes {
        for f in 0..s.src.n_morphisms() {
            if s.src.mor_src[f] != el_k[c] {
                continue;
            }
            let mut image = None;
            for (p, &cc) in class_of.iter().enumerate() {
                if cc != c {
                    continue;
                }
                let (te, se) = pairs[p];
                let se2 = s.ract[se][f].unwrap();
                let img = class_of[pair_idx((te, se2))
                    .ok_or_else(|| CkError::structural("coend action left the pair set"))?];
                match image {
                    None => image = Some(img),
                    Some(prev) if prev != img => {
                        return Err(CkError::structural(
                            "coend right action not well-defined (oracle bug)",
                        ))
                    }
                    _ => {}
                }
            }
            ract[c][f] = image;
        }
        for g in 0..t.dst.n_morphisms() {
            if t.dst.mor_dst[g] != el_l[c] {
                continue;
            }
            let mut image = None;
            for (p, &cc) in class_of.iter().enumerate() {
                if cc != c {
                    continue;
                }
                let (te, se) = pairs[p];
                let te2 = t.lact[te][g].unwrap();
                let img = class_of[pair_idx((te2, se))
                    .ok_or_else(|| CkError::structural("coend action left the pair set"))?];
                match image {
                    None => image = Some(img),
                    Some(prev) if prev != img => {
                        return Err(CkError::structural(
                            "coend left action not well-defined (oracle bug)",
                        ))
                    }
                    _ => {}
                }
            }
            lact[c][g] = image;
        }
    }
    let out = Profunctor {
        name: format!("({})∘({})", t.name, s.name),
        src: s.src.clone(),
        dst: t.dst.clone(),
        el_k,
        el_l,
        ract,
        lact,
    };
    out.validate()?;
    Ok(out)
}

/// Isomorphism of parallel profunctors: an anchor-preserving, action-
/// equivariant bijection, found by backtracking in element order.
pub fn prof_iso(p: &Profunctor, q: &Profunctor) -> Option<Vec<usize>> {
    if p.src != q.src || p.dst != q.dst || p.n_elements() != q.n_elements() {
        return None;
    }
    let n = p.n_elements();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if backtrack_prof_iso(p, q, &mut map, &mut used, 0) {
        Some(map)
    } else {
        None
    }
}

fn backtrack_prof_iso(
    p: &Profunctor,
    q: &Profunctor,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    at: usize,
) -> bool {
    if at == p.n_elements() {
        return true;
    }
    for cand in 0..q.n_elements() {
        if used[cand] || q.el_k[cand] != p.el_k[at] || q.el_l[cand] != p.el_l[at] {
            continue;
        }
        // partial equivariance against already-assigned elements
        let mut ok = true;
        map[at] = cand;
        used[cand] = true;
        'check: for e in 0..=at {
            if map[e] == usize::MAX {
                continue;
            }
            for f in 0..p.src.n_morphisms() {
                if let Some(ef) = p.ract[e][f] {
                    if ef <= at && map[ef] != usize::MAX {
                        if q.ract[map[e]][f] != Some(map[ef]) {
                            ok = false;
                            break 'check;
                        }
                    }
                }
            }
            for g in 0..p.dst.n_morphisms() {
                if let Some(ge) = p.lact[e][g] {
                    if ge <= at && map[ge] != usize::MAX {
                        if q.lact[map[e]][g] != Some(map[ge]) {
                            ok = false;
                            break 'check;
                        }
                    }
                }
            }
        }
        if ok && backtrack_prof_iso(p, q, map, used, at + 1) {
            return true;
        }
        map[at] = usize::MAX;
        used[cand] = false;
    }
    false
}

/// All-pairs shortest paths over the capped min-plus semiring
/// (Floyd–Warshall fixpoint). `cap` plays the role of ∞.
pub fn minplus_shortest(d: &[Vec<u8>], cap: u8) -> Vec<Vec<u8>> {
    let n = d.len();
    let mut out: Vec<Vec<u8>> = d.iter().map(|row| row.clone()).collect();
    for (i, row) in out.iter_mut().enumerate() {
        let _ = i;
        assert_eq!(row.len(), n, "distance matrix must be square");
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = (out[i][k] as u16 + out[k][j] as u16).min(cap as u16) as u8;
                if via < out[i][j] {
                    out[i][j] = via;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walking_arrow_is_valid() {
        let k = FinCategory::walking_arrow();
        assert_eq!(k.n_morphisms(), 3);
        assert_eq!(k.hom_set(0, 1), vec![2]);
    }

    #[test]
    fn preorder_and_monoid_constructors() {
        let le = vec![
            vec![true, true, true],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let chain = FinCategory::from_preorder("chain3", &le).unwrap();
        assert_eq!(chain.n_morphisms(), 6);
        // ℤ/2 as a one-object category
        let z2 = FinCategory::from_monoid("z2", &[vec![0, 1], vec![1, 0]], 0).unwrap();
        assert_eq!(z2.n_morphisms(), 2);
        // broken monoid: non-associative table is rejected
        // ((2·1)·2 = 1·2 = 2 but 2·(1·2) = 2·2 = 1)
        let bad = FinCategory::from_monoid(
            "bad",
            &[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 1]],
            0,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn identity_profunctor_validates() {
        let k = FinCategory::walking_arrow();
        let p = prof_id(&k);
        p.validate().unwrap();
        assert_eq!(p.component(0, 1).len(), 1);
        assert_eq!(p.component(1, 0).len(), 0);
    }

    #[test]
    fn coend_composition_quotients_walking_arrow() {
        // The (0,1) component of id∘id over the walking arrow has two pairs
        // — (id0, u) and (u, id1) — glued to a single class by the coend
        // relation. This is the canonical unit-composition collapse.
        let k = FinCategory::walking_arrow();
        let p = prof_id(&k);
        let pp = prof_compose(&p, &p).unwrap();
        assert_eq!(pp.component(0, 1).len(), 1);
        assert_eq!(pp.component(0, 0).len(), 1);
        assert_eq!(pp.component(1, 1).len(), 1);
        assert_eq!(pp.component(1, 0).len(), 0);
        assert!(prof_iso(&pp, &p).is_some());
    }

    #[test]
    fn coend_composition_counts_on_a_chain() {
        let le = vec![
            vec![true, true, true],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let chain = FinCategory::from_preorder("chain3", &le).unwrap();
        let p = prof_id(&chain);
        let pp = prof_compose(&p, &p).unwrap();
        assert!(prof_iso(&pp, &p).is_some());
        // triple composite still collapses
        let ppp = prof_compose(&pp, &p).unwrap();
        assert!(prof_iso(&ppp, &p).is_some());
    }

    #[test]
    fn functor_enumeration_walking_arrow_to_itself() {
        let k = FinCategory::walking_arrow();
        let fs = enumerate_finfunctors(&k, &k, 100_000).unwrap();
        // constant-0, constant-1, identity: exactly three endofunctors
        assert_eq!(fs.len(), 3);
        for f in &fs {
            f.validate(&k, &k).unwrap();
        }
        let id = FinFunctor::identity(&k);
        assert!(fs.contains(&id));
        // natural transformations const0 ⇒ const1: exactly one (component u)
        let c0 = &fs.iter().find(|f| f.ob == vec![0, 0]).unwrap();
        let c1 = &fs.iter().find(|f| f.ob == vec![1, 1]).unwrap();
        let nats = enumerate_nats(&k, &k, c0, c1);
        assert_eq!(nats.len(), 1);
        let back = enumerate_nats(&k, &k, c1, c0);
        assert!(back.is_empty());
    }

    #[test]
    fn representable_profunctor_of_identity_is_hom() {
        let k = FinCategory::walking_arrow();
        let d = FinFunctor::identity(&k);
        let r = representable_prof(&k, &k, &d);
        r.validate().unwrap();
        assert!(prof_iso(&r, &prof_id(&k)).is_some());
    }

    #[test]
    fn floyd_warshall_fixpoint() {
        let inf = 10u8;
        let d = vec![
            vec![0, 3, inf],
            vec![inf, 0, 4],
            vec![1, inf, 0],
        ];
        let sp = minplus_shortest(&d, inf);
        assert_eq!(sp[0][2], 7);
        assert_eq!(sp[2][1], 4);
        assert_eq!(sp[1][0], 5);
        // capped saturation behaves as ∞
        let d2 = vec![vec![0, inf], vec![inf, 0]];
        let sp2 = minplus_shortest(&d2, inf);
        assert_eq!(sp2[0][1], inf);
    }
}
