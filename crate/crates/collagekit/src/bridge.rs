//! Translations between the table-level oracle and the enriched side.
//!
//! A singleton-arity category over the span base is an internal category in
//! finite sets: one object whose extent is the object set and whose single
//! hom is the span of morphisms. The functions here move categories,
//! functors, transformations and profunctors across that reading in both
//! directions, and [`cat1_equiv_check`] packages the bijection evidence for a
//! pair of finite categories. The oracle module stays independent of the
//! span machinery; everything that touches both worlds lives here.

use std::sync::Arc;

use crate::base::{
    pair_index, span_pairs, ArityClass, Base, BaseObj, Budget, Hom1, Kind,
};
use crate::enriched::{
    validate_ecategory, validate_efunctor, validate_etrans, ECategory, EFunctor, EModule,
    ETransformation,
};
use crate::error::{CkError, Result};
use crate::oracle::{
    enumerate_finfunctors, enumerate_nats, FinCategory, FinFunctor, NatTransf, Profunctor,
};

/// The one-object enriched category of a finite category: extent = object
/// set, hom = the span of morphisms (left leg targets, right leg sources),
/// composition and unit read straight off the tables.
pub fn fincat_to_ecat(k: &FinCategory) -> Result<Arc<ECategory>> {
    let b = Base::span_finset(ArityClass::Singleton);
    let ext = BaseObj::Set(k.n_objects);
    let n = k.n_morphisms();
    let hom = Hom1::span(k.n_objects, k.n_objects, k.mor_dst.clone(), k.mor_src.clone())?;
    let mut fun = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if k.mor_src[p] == k.mor_dst[q] {
                fun.push(k.comp[p][q].expect("composable pair in a validated category"));
            }
        }
    }
    let comp = b.hom2_span(&b.compose1(&hom, &hom)?, &hom, fun)?;
    let unit = b.hom2_span(&b.id1(&ext)?, &hom, k.identity.clone())?;
    Ok(Arc::new(ECategory::new(
        k.name.clone(),
        b,
        vec!["*".into()],
        vec![ext],
        vec![vec![hom]],
        vec![vec![vec![comp]]],
        vec![unit],
    )?))
}

/// Read a finite category back off a one-object span category. Inverse to
/// [`fincat_to_ecat`] on canonical encodings.
pub fn ecat_to_fincat(c: &ECategory) -> Result<FinCategory> {
    if !matches!(c.base.kind(), Kind::SpanFinSet) {
        return Err(CkError::structural("ecat_to_fincat requires the span base"));
    }
    if c.n_objects() != 1 {
        return Err(CkError::structural("ecat_to_fincat requires a one-object category"));
    }
    let hom = c.hom[0][0].as_span()?;
    let n = hom.apex;
    let comp_fun = c.comp[0][0][0].as_fun()?;
    let mut comp = vec![vec![None; n]; n];
    let mut at = 0usize;
    for p in 0..n {
        for q in 0..n {
            if hom.right[p] == hom.left[q] {
                comp[p][q] = Some(comp_fun[at]);
                at += 1;
            }
        }
    }
    FinCategory::new(
        c.name.clone(),
        c.extents[0].dim(),
        hom.right.clone(),
        hom.left.clone(),
        c.unit[0].as_fun()?.clone(),
        comp,
    )
}

/// Canonical display name for a bridge functor, so that independently
/// enumerated functors and round-tripped ones compare equal.
fn functor_label(ob: &[usize]) -> String {
    let body: Vec<String> = ob.iter().map(|o| o.to_string()).collect();
    format!("F({})", body.join(","))
}

/// Object map and left-leg inverse of a functor cell, which must be the
/// graph of a function up to the (bijective) left leg.
fn graph_of_cells(cells: &Hom1, points: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let s = cells.as_span()?;
    if s.apex != points {
        return Err(CkError::structural("functor cell is not a function graph"));
    }
    let mut left_inv = vec![usize::MAX; points];
    let mut ob = vec![usize::MAX; points];
    for j in 0..s.apex {
        if left_inv[s.left[j]] != usize::MAX {
            return Err(CkError::structural("functor cell is not a function graph"));
        }
        left_inv[s.left[j]] = j;
        ob[s.left[j]] = s.right[j];
    }
    Ok((ob, left_inv))
}

/// The enriched functor of a table functor, between the [`fincat_to_ecat`]
/// images of its endpoints: object cell = graph of the object map, square =
/// the morphism table transported along the canonical pair orderings.
pub fn finfunctor_to_efunctor(
    d: &FinFunctor,
    ck: &Arc<ECategory>,
    cl: &Arc<ECategory>,
) -> Result<EFunctor> {
    let b = &ck.base;
    let cells = b.graph_span(ck.extents[0].dim(), cl.extents[0].dim(), &d.ob)?;
    let hom_k = &ck.hom[0][0];
    let hom_l = &cl.hom[0][0];
    let src1 = b.compose1(&cells, hom_k)?;
    let dst1 = b.compose1(hom_l, &cells)?;
    let dst_pairs = span_pairs(cells.as_span()?, hom_l.as_span()?);
    let (_, left_inv) = graph_of_cells(&cells, ck.extents[0].dim())?;
    let sk = hom_k.as_span()?;
    let mut fun = Vec::with_capacity(sk.apex);
    for a in 0..sk.apex {
        fun.push(pair_index(&dst_pairs, (left_inv[sk.left[a]], d.mor[a]))?);
    }
    let sq = b.hom2_span(&src1, &dst1, fun)?;
    EFunctor::new(
        functor_label(&d.ob),
        ck.clone(),
        cl.clone(),
        vec![0],
        vec![cells],
        vec![vec![sq]],
    )
}

/// Read the table functor back off a one-object enriched functor.
pub fn efunctor_to_finfunctor(d: &EFunctor) -> Result<FinFunctor> {
    if d.src.n_objects() != 1 || d.dst.n_objects() != 1 {
        return Err(CkError::structural("efunctor_to_finfunctor requires one-object categories"));
    }
    let (ob, _) = graph_of_cells(&d.cells[0], d.src.extents[0].dim())?;
    let dst_pairs = span_pairs(d.cells[0].as_span()?, d.dst.hom[0][0].as_span()?);
    let mor = d.sq[0][0].as_fun()?.iter().map(|&p| dst_pairs[p].1).collect();
    Ok(FinFunctor { ob, mor })
}

/// The enriched transformation of a natural transformation between bridge
/// functors `d, e`.
pub fn nat_to_etrans(
    t: &NatTransf,
    d: &Arc<EFunctor>,
    e: &Arc<EFunctor>,
) -> Result<ETransformation> {
    let b = &d.src.base;
    let hom_l = &d.dst.hom[0][0];
    let dst1 = b.compose1(hom_l, &e.cells[0])?;
    let pairs = span_pairs(e.cells[0].as_span()?, hom_l.as_span()?);
    let (_, e_left_inv) = graph_of_cells(&e.cells[0], e.src.extents[0].dim())?;
    let ds = d.cells[0].as_span()?;
    let mut fun = Vec::with_capacity(ds.apex);
    for j in 0..ds.apex {
        let u = ds.left[j];
        fun.push(pair_index(&pairs, (e_left_inv[u], t.comp[u]))?);
    }
    let theta = b.hom2_span(&d.cells[0], &dst1, fun)?;
    ETransformation::new(d.clone(), e.clone(), vec![theta])
}

/// Read the component table back off a one-object transformation.
pub fn etrans_to_nat(t: &ETransformation) -> Result<NatTransf> {
    let (d, e) = (&t.src, &t.dst);
    let pairs = span_pairs(e.cells[0].as_span()?, d.dst.hom[0][0].as_span()?);
    let ds = d.cells[0].as_span()?;
    let fun = t.comp[0].as_fun()?;
    let mut comp = vec![usize::MAX; d.src.extents[0].dim()];
    for j in 0..ds.apex {
        comp[ds.left[j]] = pairs[fun[j]].1;
    }
    Ok(NatTransf { comp })
}

/// The module of a profunctor, between freshly built endpoint categories.
pub fn prof_to_emodule(p: &Profunctor) -> Result<EModule> {
    let ca = fincat_to_ecat(&p.src)?;
    let cb = fincat_to_ecat(&p.dst)?;
    prof_to_emodule_between(p, &ca, &cb)
}

/// The module of a profunctor, reusing already-built endpoint categories
/// (which must be the [`fincat_to_ecat`] images of `p.src` and `p.dst`).
pub fn prof_to_emodule_between(
    p: &Profunctor,
    ca: &Arc<ECategory>,
    cb: &Arc<ECategory>,
) -> Result<EModule> {
    let b = &ca.base;
    let comp =
        Hom1::span(ca.extents[0].dim(), cb.extents[0].dim(), p.el_k.clone(), p.el_l.clone())?;
    let hom_k = &ca.hom[0][0];
    let hom_l = &cb.hom[0][0];
    let mut r_fun = Vec::new();
    for &(a, e) in &span_pairs(hom_k.as_span()?, comp.as_span()?) {
        r_fun.push(p.ract[e][a].ok_or_else(|| CkError::structural("missing right action"))?);
    }
    let ract = b.hom2_span(&b.compose1(&comp, hom_k)?, &comp, r_fun)?;
    let mut l_fun = Vec::new();
    for &(e, g) in &span_pairs(comp.as_span()?, hom_l.as_span()?) {
        l_fun.push(p.lact[e][g].ok_or_else(|| CkError::structural("missing left action"))?);
    }
    let lact = b.hom2_span(&b.compose1(hom_l, &comp)?, &comp, l_fun)?;
    EModule::new(
        p.name.clone(),
        ca.clone(),
        cb.clone(),
        vec![vec![comp]],
        vec![vec![vec![ract]]],
        vec![vec![vec![lact]]],
    )
}

/// Read a profunctor off a module between one-object span categories.
/// Inverse to [`prof_to_emodule`] on canonical encodings.
pub fn emodule_to_prof(m: &EModule) -> Result<Profunctor> {
    let k = ecat_to_fincat(&m.src)?;
    let l = ecat_to_fincat(&m.dst)?;
    let s = m.comp[0][0].as_span()?;
    let hom_k = m.src.hom[0][0].as_span()?;
    let hom_l = m.dst.hom[0][0].as_span()?;
    let mut ract = vec![vec![None; k.n_morphisms()]; s.apex];
    let r_fun = m.ract[0][0][0].as_fun()?;
    for (p, &(a, e)) in span_pairs(hom_k, s).iter().enumerate() {
        ract[e][a] = Some(r_fun[p]);
    }
    let mut lact = vec![vec![None; l.n_morphisms()]; s.apex];
    let l_fun = m.lact[0][0][0].as_fun()?;
    for (p, &(e, g)) in span_pairs(s, hom_l).iter().enumerate() {
        lact[e][g] = Some(l_fun[p]);
    }
    let prof = Profunctor {
        name: m.name.clone(),
        src: k,
        dst: l,
        el_k: s.left.clone(),
        el_l: s.right.clone(),
        ract,
        lact,
    };
    prof.validate()?;
    Ok(prof)
}

/// Evidence that the one-object reading is an equivalence at a pair of
/// finite categories: the functor sets and all transformation sets on the
/// two sides are in explicit, round-tripping bijection.
#[derive(Debug, Clone)]
pub struct Cat1Report {
    pub k_name: String,
    pub l_name: String,
    /// functors `K → L` found by the oracle enumeration
    pub functor_count: usize,
    /// validated enriched functors found by the span-side enumeration
    pub efunctor_count: usize,
    /// ordered functor pairs examined for transformations
    pub pair_count: usize,
    /// natural transformations over all pairs (oracle side)
    pub nat_count: usize,
    /// enriched transformations over all pairs (span side)
    pub etrans_count: usize,
    pub failures: Vec<String>,
}

impl Cat1Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compare the functor and transformation sets of `K → L` on the oracle side
/// with those of `fincat_to_ecat(K) → fincat_to_ecat(L)` on the enriched
/// side. Both sides are enumerated independently; every element is carried
/// across and back and must land on itself.
pub fn cat1_equiv_check(
    k: &FinCategory,
    l: &FinCategory,
    budget: &mut Budget,
) -> Result<Cat1Report> {
    let ck = fincat_to_ecat(k)?;
    let cl = fincat_to_ecat(l)?;
    let mut rep = Cat1Report {
        k_name: k.name.clone(),
        l_name: l.name.clone(),
        functor_count: 0,
        efunctor_count: 0,
        pair_count: 0,
        nat_count: 0,
        etrans_count: 0,
        failures: Vec::new(),
    };
    if !validate_ecategory(&ck)?.ok() || !validate_ecategory(&cl)?.ok() {
        rep.failures.push("bridge image fails the enriched category laws".into());
        return Ok(rep);
    }
    let b = &ck.base;

    let fin = enumerate_finfunctors(k, l, budget.remaining)?;
    rep.functor_count = fin.len();
    let mut bridged = Vec::with_capacity(fin.len());
    for d in &fin {
        let ef = finfunctor_to_efunctor(d, &ck, &cl)?;
        if !validate_efunctor(&ef)?.ok() {
            rep.failures.push(format!("bridge functor of {:?} fails validation", d.ob));
        }
        if efunctor_to_finfunctor(&ef)? != *d {
            rep.failures.push(format!("functor round trip differs at {:?}", d.ob));
        }
        bridged.push(Arc::new(ef));
    }

    let mut direct = Vec::new();
    for cells in b.enumerate_tight_cells(&ck.extents[0], &cl.extents[0], budget)? {
        let src1 = b.compose1(&cells, &ck.hom[0][0])?;
        let dst1 = b.compose1(&cl.hom[0][0], &cells)?;
        let (ob, _) = graph_of_cells(&cells, ck.extents[0].dim())?;
        for sq in b.enumerate_hom2(&src1, &dst1, budget)? {
            let cand = EFunctor::new(
                functor_label(&ob),
                ck.clone(),
                cl.clone(),
                vec![0],
                vec![cells.clone()],
                vec![vec![sq]],
            );
            if let Ok(f) = cand {
                if validate_efunctor(&f)?.ok() {
                    direct.push(f);
                }
            }
        }
    }
    rep.efunctor_count = direct.len();
    if direct.len() != fin.len() {
        rep.failures
            .push(format!("functor counts differ: {} table, {} enriched", fin.len(), direct.len()));
    }
    let mut images: Vec<FinFunctor> = Vec::with_capacity(direct.len());
    for f in &direct {
        let back = efunctor_to_finfunctor(f)?;
        if back.validate(k, l).is_err() {
            rep.failures.push(format!("{} maps to an invalid table functor", f.name));
        }
        if !fin.contains(&back) {
            rep.failures.push(format!("{} is missing from the oracle enumeration", f.name));
        }
        if images.contains(&back) {
            rep.failures.push(format!("{} collides with another enriched functor", f.name));
        }
        if finfunctor_to_efunctor(&back, &ck, &cl)? != *f {
            rep.failures.push(format!("enriched round trip differs at {}", f.name));
        }
        images.push(back);
    }

    for (i, di) in fin.iter().enumerate() {
        for (j, dj) in fin.iter().enumerate() {
            rep.pair_count += 1;
            let nats = enumerate_nats(k, l, di, dj);
            rep.nat_count += nats.len();
            let (fi, fj) = (&bridged[i], &bridged[j]);
            let dst1 = b.compose1(&cl.hom[0][0], &fj.cells[0])?;
            let mut ets = Vec::new();
            for theta in b.enumerate_hom2(&fi.cells[0], &dst1, budget)? {
                if let Ok(t) = ETransformation::new(fi.clone(), fj.clone(), vec![theta]) {
                    if validate_etrans(&t)?.ok() {
                        ets.push(t);
                    }
                }
            }
            rep.etrans_count += ets.len();
            if ets.len() != nats.len() {
                rep.failures.push(format!(
                    "transformation counts differ at ({:?} ⇒ {:?}): {} table, {} enriched",
                    di.ob,
                    dj.ob,
                    nats.len(),
                    ets.len()
                ));
            }
            for n in &nats {
                let t = nat_to_etrans(n, fi, fj)?;
                if !validate_etrans(&t)?.ok() {
                    rep.failures.push(format!("bridge of {:?} fails naturality", n.comp));
                }
                if etrans_to_nat(&t)? != *n {
                    rep.failures.push(format!("transformation round trip differs at {:?}", n.comp));
                }
            }
            for t in &ets {
                let n = etrans_to_nat(t)?;
                if n.validate(k, l, di, dj).is_err() || !nats.contains(&n) {
                    rep.failures.push(format!(
                        "enriched transformation maps outside the oracle set at ({i},{j})"
                    ));
                }
                if nat_to_etrans(&n, fi, fj)? != *t {
                    rep.failures.push(format!("enriched transformation round trip differs at ({i},{j})"));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::DEFAULT_SEARCH_BUDGET;
    use crate::enriched::validate_emodule;
    use crate::modcat::mod_compose;
    use crate::oracle::{prof_compose, prof_id, prof_iso};

    #[test]
    fn walking_arrow_round_trips() {
        let k = FinCategory::walking_arrow();
        let c = fincat_to_ecat(&k).unwrap();
        assert_eq!(c.hom[0][0].as_span().unwrap().apex, 3);
        assert!(validate_ecategory(&c).unwrap().ok());
        assert_eq!(ecat_to_fincat(&c).unwrap(), k);
    }

    #[test]
    fn terminal_category_has_singleton_hom() {
        let k = FinCategory::discrete(1);
        let c = fincat_to_ecat(&k).unwrap();
        assert_eq!(c.hom[0][0].as_span().unwrap().apex, 1);
        assert_eq!(ecat_to_fincat(&c).unwrap(), k);
    }

    /// Two objects, two parallel non-identity arrows `0 → 1`, no relations.
    fn parallel_pair() -> FinCategory {
        let src = vec![0usize, 1, 0, 0];
        let dst = vec![0usize, 1, 1, 1];
        let ids = vec![0usize, 1];
        let mut comp = vec![vec![None; 4]; 4];
        for f in 0..4 {
            comp[f][ids[src[f]]] = Some(f);
            comp[ids[dst[f]]][f] = Some(f);
        }
        FinCategory::new("pair", 2, src, dst, ids, comp).unwrap()
    }

    #[test]
    fn functor_sets_biject_on_the_walking_arrow_pair() {
        let k = FinCategory::walking_arrow();
        let l = parallel_pair();
        let mut budget = Budget::new(DEFAULT_SEARCH_BUDGET);
        let rep = cat1_equiv_check(&k, &l, &mut budget).unwrap();
        assert!(rep.ok(), "failures: {:?}", rep.failures);
        // ob map (0,0) forces u ↦ id0; (1,1) forces u ↦ id1; (0,1) admits
        // u ↦ a or u ↦ b; (1,0) admits nothing.
        assert_eq!(rep.functor_count, 4);
        assert_eq!(rep.efunctor_count, 4);
    }

    #[test]
    fn terminal_pair_has_one_functor_and_one_transformation() {
        let k = FinCategory::discrete(1);
        let mut budget = Budget::new(DEFAULT_SEARCH_BUDGET);
        let rep = cat1_equiv_check(&k, &k, &mut budget).unwrap();
        assert!(rep.ok(), "failures: {:?}", rep.failures);
        assert_eq!(rep.functor_count, 1);
        assert_eq!(rep.nat_count, 1);
        assert_eq!(rep.etrans_count, 1);
    }

    #[test]
    fn identity_profunctor_round_trips_and_composes() {
        let k = FinCategory::walking_arrow();
        let p = prof_id(&k);
        let m = prof_to_emodule(&p).unwrap();
        assert!(validate_emodule(&m).unwrap().ok());
        assert_eq!(emodule_to_prof(&m).unwrap(), p);

        // mod-level composition agrees with the coend oracle
        let mm = mod_compose(&m, &m).unwrap();
        let back = emodule_to_prof(&mm.composite).unwrap();
        let qq = prof_compose(&p, &p).unwrap();
        assert!(prof_iso(&back, &qq).is_some());
    }
}
