//! The derived bicategory `Mod_κ(C)`: enriched categories, modules between
//! them, and module morphisms, over any locally κ-cocomplete base.
//!
//! Module composition is computed, not postulated: `(T∘S)(u,w)` is the
//! reflexive coequalizer of the two middle actions on the coproduct
//! `Σ_x T(u,x)∘S(x,w)`. Every structure map that category theory says is
//! "induced" (actions on composites, unitors, associators, whiskers) is
//! obtained here by actually factoring through that colimit, so a mistake in
//! any convention shows up as a hard error rather than a silently wrong
//! table. [ModComposite] keeps the colimit data around for exactly this
//! purpose.

use std::sync::Arc;

use crate::base::{Base, BaseObj, Coequalizer, Coproduct, H1, Hom1, Hom2, Kind, Mat};
use crate::base::Budget;
use crate::comp::{self, Expr};
use crate::enriched::{
    validate_efunctor, validate_emodule, ECategory, EFunctor, EModule, ETransformation, ModCell,
};
use crate::error::{CkError, Result};
use crate::quantale::Quantale;

// ----------------------------------------------------------------------
// composites
// ----------------------------------------------------------------------

/// The colimit presentation of one component of a composite module.
#[derive(Debug, Clone)]
pub struct CompositePart {
    /// Coproduct over middle objects of `t(u,x)∘s(x,w)`.
    pub coprod: Coproduct,
    /// Reflexive coequalizer identifying the two middle actions.
    pub coeq: Coequalizer,
}

/// A composite module together with the cocones that define it. Induced
/// maps out of the composite are computed by factoring through `parts`,
/// and callers can re-derive any canonical map into it via [`Self::cocone_leg`].
#[derive(Debug, Clone)]
pub struct ModComposite {
    pub composite: EModule,
    /// Indexed `parts[u][w]` for `u ∈ dst(t)`, `w ∈ src(s)`.
    pub parts: Vec<Vec<CompositePart>>,
}

impl ModComposite {
    /// The canonical map `t(u,x)∘s(x,w) ⇒ (t∘s)(u,w)` at middle object `x`.
    pub fn cocone_leg(&self, u: usize, w: usize, x: usize) -> Result<Hom2> {
        let part = &self.parts[u][w];
        let b = base_of(&self.composite);
        b.vcomp(&part.coeq.cocone, &part.coprod.injections[x])
    }
}

fn base_of(m: &EModule) -> Base {
    m.src.base.clone()
}

/// Copair legs through a coproduct, degrading to the unique map out of the
/// initial 1-cell when the index set is empty.
fn copair(b: &Base, cp: &Coproduct, legs: &[Hom2], z: &Hom1) -> Result<Hom2> {
    if legs.is_empty() {
        b.hom2_from_initial(&cp.obj, z)
    } else {
        b.coprod_factor(cp, legs)
    }
}

fn copair_rwhisk(b: &Base, cp: &Coproduct, k: &Hom1, legs: &[Hom2], z: &Hom1) -> Result<Hom2> {
    if legs.is_empty() {
        b.hom2_from_initial(&b.compose1(&cp.obj, k)?, z)
    } else {
        b.coprod_factor_rwhisk(cp, k, legs)
    }
}

fn copair_lwhisk(b: &Base, k: &Hom1, cp: &Coproduct, legs: &[Hom2], z: &Hom1) -> Result<Hom2> {
    if legs.is_empty() {
        b.hom2_from_initial(&b.compose1(k, &cp.obj)?, z)
    } else {
        b.coprod_factor_lwhisk(k, cp, legs)
    }
}

/// The identity module on `c`: components are the homs, both actions are
/// composition.
pub fn mod_id(c: &Arc<ECategory>) -> Result<EModule> {
    EModule::new(
        format!("1[{}]", c.name),
        c.clone(),
        c.clone(),
        c.hom.clone(),
        c.comp.clone(),
        c.comp.clone(),
    )
}

/// The initial module `src ⇸ dst` (all components initial).
pub fn initial_module(src: &Arc<ECategory>, dst: &Arc<ECategory>) -> Result<EModule> {
    let b = &src.base;
    let (na, nb) = (src.n_objects(), dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.initial_hom1(&src.extents[x], &dst.extents[u])?);
        }
        comp.push(row);
    }
    let mut ract = Vec::with_capacity(nb);
    let mut lact = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut rx = Vec::with_capacity(na);
        for x in 0..na {
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let s = b.compose1(&comp[u][x], &src.hom[x][y])?;
                ry.push(b.hom2_from_initial(&s, &comp[u][y])?);
            }
            rx.push(ry);
        }
        ract.push(rx);
        let mut lv = Vec::with_capacity(nb);
        for v in 0..nb {
            let mut lx = Vec::with_capacity(na);
            for x in 0..na {
                let s = b.compose1(&dst.hom[u][v], &comp[v][x])?;
                lx.push(b.hom2_from_initial(&s, &comp[u][x])?);
            }
            lv.push(lx);
        }
        lact.push(lv);
    }
    EModule::new("0", src.clone(), dst.clone(), comp, ract, lact)
}

/// Compose modules `t∘s` (`t` after `s`) by coequalizer, returning the
/// composite together with its defining colimit cocones.
pub fn mod_compose(t: &EModule, s: &EModule) -> Result<ModComposite> {
    if t.src != s.dst {
        return Err(CkError::boundary("mod_compose: middle categories differ"));
    }
    let a_cat = s.src.clone();
    let b_cat = &t.src;
    let c_cat = t.dst.clone();
    let b = &a_cat.base;
    let (na, nb, nc) = (a_cat.n_objects(), b_cat.n_objects(), c_cat.n_objects());

    // Components: per (u, w), quotient the middle coproduct by the relation
    // (t·b, s) ~ (t, b·s).
    let mut comp = Vec::with_capacity(nc);
    let mut parts: Vec<Vec<CompositePart>> = Vec::with_capacity(nc);
    for u in 0..nc {
        let mut comp_row = Vec::with_capacity(na);
        let mut part_row = Vec::with_capacity(na);
        for w in 0..na {
            let summands = (0..nb)
                .map(|x| b.compose1(&t.comp[u][x], &s.comp[x][w]))
                .collect::<Result<Vec<_>>>()?;
            let coprod = b.coproduct(&summands, &a_cat.extents[w], &c_cat.extents[u])?;

            let mut pair_summands = Vec::with_capacity(nb * nb);
            for x in 0..nb {
                for y in 0..nb {
                    let inner = b.compose1(&b_cat.hom[x][y], &s.comp[y][w])?;
                    pair_summands.push(b.compose1(&t.comp[u][x], &inner)?);
                }
            }
            let pair_cp = b.coproduct(&pair_summands, &a_cat.extents[w], &c_cat.extents[u])?;

            let mut via_t = Vec::with_capacity(nb * nb);
            let mut via_s = Vec::with_capacity(nb * nb);
            for x in 0..nb {
                for y in 0..nb {
                    // t(u,x)∘(B(x,y)∘s(y,w)) ⇒ (t(u,x)∘B(x,y))∘s(y,w) ⇒ t(u,y)∘s(y,w)
                    let assoc = b.associator(&t.comp[u][x], &b_cat.hom[x][y], &s.comp[y][w])?;
                    let acted = b.whisker_right(&t.ract[u][x][y], &s.comp[y][w])?;
                    via_t.push(b.vcomp(&coprod.injections[y], &b.vcomp(&acted, &assoc.bwd)?)?);
                    // t(u,x)∘(B(x,y)∘s(y,w)) ⇒ t(u,x)∘s(x,w)
                    let acted = b.whisker_left(&t.comp[u][x], &s.lact[x][y][w])?;
                    via_s.push(b.vcomp(&coprod.injections[x], &acted)?);
                }
            }
            let rho = copair(b, &pair_cp, &via_t, &coprod.obj)?;
            let lam = copair(b, &pair_cp, &via_s, &coprod.obj)?;
            let coeq = b.refl_coequalizer(&rho, &lam)?;
            comp_row.push(coeq.obj.clone());
            part_row.push(CompositePart { coprod, coeq });
        }
        comp.push(comp_row);
        parts.push(part_row);
    }

    let leg = |u: usize, w: usize, x: usize| -> Result<Hom2> {
        let part = &parts[u][w];
        b.vcomp(&part.coeq.cocone, &part.coprod.injections[x])
    };

    // Right action: factor the action of s through each coequalizer.
    let mut ract = Vec::with_capacity(nc);
    for u in 0..nc {
        let mut rw = Vec::with_capacity(na);
        for w in 0..na {
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let mut legs = Vec::with_capacity(nb);
                for x in 0..nb {
                    let assoc = b.associator(&t.comp[u][x], &s.comp[x][w], &a_cat.hom[w][y])?;
                    let acted = b.whisker_left(&t.comp[u][x], &s.ract[x][w][y])?;
                    legs.push(b.vcomp(&leg(u, y, x)?, &b.vcomp(&acted, &assoc.fwd)?)?);
                }
                let psi =
                    copair_rwhisk(b, &parts[u][w].coprod, &a_cat.hom[w][y], &legs, &comp[u][y])?;
                ry.push(b.coeq_factor_rwhisk(&parts[u][w].coeq, &a_cat.hom[w][y], &psi)?);
            }
            rw.push(ry);
        }
        ract.push(rw);
    }

    // Left action: symmetric, acting through t.
    let mut lact = Vec::with_capacity(nc);
    for u in 0..nc {
        let mut lv = Vec::with_capacity(nc);
        for v in 0..nc {
            let mut lw = Vec::with_capacity(na);
            for w in 0..na {
                let mut legs = Vec::with_capacity(nb);
                for x in 0..nb {
                    let assoc = b.associator(&c_cat.hom[u][v], &t.comp[v][x], &s.comp[x][w])?;
                    let acted = b.whisker_right(&t.lact[u][v][x], &s.comp[x][w])?;
                    legs.push(b.vcomp(&leg(u, w, x)?, &b.vcomp(&acted, &assoc.bwd)?)?);
                }
                let psi =
                    copair_lwhisk(b, &c_cat.hom[u][v], &parts[v][w].coprod, &legs, &comp[u][w])?;
                lw.push(b.coeq_factor_lwhisk(&c_cat.hom[u][v], &parts[v][w].coeq, &psi)?);
            }
            lv.push(lw);
        }
        lact.push(lv);
    }

    let composite = EModule::new(
        format!("({}∘{})", t.name, s.name),
        a_cat.clone(),
        c_cat.clone(),
        comp,
        ract,
        lact,
    )?;
    Ok(ModComposite { composite, parts })
}

// ----------------------------------------------------------------------
// module morphisms
// ----------------------------------------------------------------------

/// The identity morphism on a module.
pub fn modcell_id(m: &Arc<EModule>) -> Result<ModCell> {
    let b = base_of(m);
    let comp = m
        .comp
        .iter()
        .map(|row| row.iter().map(|h| b.id2(h)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ModCell::new(m.clone(), m.clone(), comp)
}

/// Vertical composite `cb∘ca` (`cb` after `ca`).
pub fn modcell_vcomp(cb: &ModCell, ca: &ModCell) -> Result<ModCell> {
    if ca.dst != cb.src {
        return Err(CkError::boundary("modcell_vcomp: cells do not meet"));
    }
    let b = base_of(&ca.src);
    let (na, nb) = (ca.src.src.n_objects(), ca.src.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.vcomp(&cb.comp[u][x], &ca.comp[u][x])?);
        }
        comp.push(row);
    }
    ModCell::new(ca.src.clone(), cb.dst.clone(), comp)
}

/// The unique morphism out of an initial module.
pub fn modcell_from_initial(mf: &Arc<EModule>, mg: &Arc<EModule>) -> Result<ModCell> {
    let b = base_of(mf);
    let (na, nb) = (mf.src.n_objects(), mf.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.hom2_from_initial(&mf.comp[u][x], &mg.comp[u][x])?);
        }
        comp.push(row);
    }
    ModCell::new(mf.clone(), mg.clone(), comp)
}

/// Invert a morphism componentwise, if possible. The componentwise inverse
/// of an equivariant iso is equivariant, so no re-validation is needed.
pub fn modcell_invert(c: &ModCell) -> Result<Option<ModCell>> {
    let b = base_of(&c.src);
    let (na, nb) = (c.src.src.n_objects(), c.src.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            match b.is_invertible(&c.comp[u][x])? {
                Some(inv) => row.push(inv),
                None => return Ok(None),
            }
        }
        comp.push(row);
    }
    Ok(Some(ModCell::new(c.dst.clone(), c.src.clone(), comp)?))
}

/// Left whisker `k∘a` of a cell `a : s ⇒ s′` by a module `k`.
pub fn mod_whisker_left(k: &EModule, a: &ModCell) -> Result<ModCell> {
    if a.src.dst != k.src {
        return Err(CkError::boundary("mod_whisker_left: boundary mismatch"));
    }
    let b = base_of(k);
    let c1 = mod_compose(k, &a.src)?;
    let c2 = mod_compose(k, &a.dst)?;
    let nb = k.src.n_objects();
    let (na, nc) = (a.src.src.n_objects(), k.dst.n_objects());
    let mut comp = Vec::with_capacity(nc);
    for u in 0..nc {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let legs = (0..nb)
                .map(|x| {
                    let wl = b.whisker_left(&k.comp[u][x], &a.comp[x][w])?;
                    b.vcomp(&c2.cocone_leg(u, w, x)?, &wl)
                })
                .collect::<Result<Vec<_>>>()?;
            let psi = copair(&b, &c1.parts[u][w].coprod, &legs, &c2.composite.comp[u][w])?;
            row.push(b.coeq_factor(&c1.parts[u][w].coeq, &psi)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(c1.composite), Arc::new(c2.composite), comp)
}

/// Right whisker `a∘k` of a cell `a : t ⇒ t′` by a module `k`.
pub fn mod_whisker_right(a: &ModCell, k: &EModule) -> Result<ModCell> {
    if k.dst != a.src.src {
        return Err(CkError::boundary("mod_whisker_right: boundary mismatch"));
    }
    let b = base_of(k);
    let c1 = mod_compose(&a.src, k)?;
    let c2 = mod_compose(&a.dst, k)?;
    let nb = k.dst.n_objects();
    let (na, nc) = (k.src.n_objects(), a.src.dst.n_objects());
    let mut comp = Vec::with_capacity(nc);
    for u in 0..nc {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let legs = (0..nb)
                .map(|x| {
                    let wr = b.whisker_right(&a.comp[u][x], &k.comp[x][w])?;
                    b.vcomp(&c2.cocone_leg(u, w, x)?, &wr)
                })
                .collect::<Result<Vec<_>>>()?;
            let psi = copair(&b, &c1.parts[u][w].coprod, &legs, &c2.composite.comp[u][w])?;
            row.push(b.coeq_factor(&c1.parts[u][w].coeq, &psi)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(c1.composite), Arc::new(c2.composite), comp)
}

// ----------------------------------------------------------------------
// coherence cells
// ----------------------------------------------------------------------

/// Associator `((f∘g)∘h ⇒ f∘(g∘h), back)`, induced through the defining
/// colimits of both bracketings.
pub fn mod_associator(f: &EModule, g: &EModule, h: &EModule) -> Result<(ModCell, ModCell)> {
    if g.dst != f.src || h.dst != g.src {
        return Err(CkError::boundary("mod_associator: modules not composable"));
    }
    let b = base_of(f);
    let (nd, nc, nb, na) =
        (f.dst.n_objects(), f.src.n_objects(), g.src.n_objects(), h.src.n_objects());
    let fg = mod_compose(f, g)?;
    let gh = mod_compose(g, h)?;
    let lhs = mod_compose(&fg.composite, h)?;
    let rhs = mod_compose(f, &gh.composite)?;

    let mut fwd = Vec::with_capacity(nd);
    let mut bwd = Vec::with_capacity(nd);
    for d in 0..nd {
        let mut fwd_row = Vec::with_capacity(na);
        let mut bwd_row = Vec::with_capacity(na);
        for a in 0..na {
            // fwd: each lhs summand (f∘g)(d,x)∘h(x,a) maps in by unpacking
            // the inner coequalizer, reassociating, and repacking on the
            // right.
            let mut legs_b = Vec::with_capacity(nb);
            for x in 0..nb {
                let mut inner = Vec::with_capacity(nc);
                for c in 0..nc {
                    let assoc = b.associator(&f.comp[d][c], &g.comp[c][x], &h.comp[x][a])?;
                    let pack = b.whisker_left(&f.comp[d][c], &gh.cocone_leg(c, a, x)?)?;
                    inner.push(b.vcomp(&rhs.cocone_leg(d, a, c)?, &b.vcomp(&pack, &assoc.fwd)?)?);
                }
                let psi = copair_rwhisk(
                    &b,
                    &fg.parts[d][x].coprod,
                    &h.comp[x][a],
                    &inner,
                    &rhs.composite.comp[d][a],
                )?;
                legs_b.push(b.coeq_factor_rwhisk(&fg.parts[d][x].coeq, &h.comp[x][a], &psi)?);
            }
            let psi = copair(&b, &lhs.parts[d][a].coprod, &legs_b, &rhs.composite.comp[d][a])?;
            fwd_row.push(b.coeq_factor(&lhs.parts[d][a].coeq, &psi)?);

            // bwd: mirror image.
            let mut legs_c = Vec::with_capacity(nc);
            for c in 0..nc {
                let mut inner = Vec::with_capacity(nb);
                for x in 0..nb {
                    let assoc = b.associator(&f.comp[d][c], &g.comp[c][x], &h.comp[x][a])?;
                    let pack = b.whisker_right(&fg.cocone_leg(d, x, c)?, &h.comp[x][a])?;
                    inner.push(b.vcomp(&lhs.cocone_leg(d, a, x)?, &b.vcomp(&pack, &assoc.bwd)?)?);
                }
                let psi = copair_lwhisk(
                    &b,
                    &f.comp[d][c],
                    &gh.parts[c][a].coprod,
                    &inner,
                    &lhs.composite.comp[d][a],
                )?;
                legs_c.push(b.coeq_factor_lwhisk(&f.comp[d][c], &gh.parts[c][a].coeq, &psi)?);
            }
            let psi = copair(&b, &rhs.parts[d][a].coprod, &legs_c, &lhs.composite.comp[d][a])?;
            bwd_row.push(b.coeq_factor(&rhs.parts[d][a].coeq, &psi)?);
        }
        fwd.push(fwd_row);
        bwd.push(bwd_row);
    }
    let lhs_m = Arc::new(lhs.composite);
    let rhs_m = Arc::new(rhs.composite);
    Ok((
        ModCell::new(lhs_m.clone(), rhs_m.clone(), fwd)?,
        ModCell::new(rhs_m, lhs_m, bwd)?,
    ))
}

/// Left unitor `(1∘m ⇒ m, m ⇒ 1∘m)`. The forward direction is the left
/// action copaired through the coequalizer; the backward direction inserts
/// the unit at the diagonal summand.
pub fn mod_lunitor(m: &Arc<EModule>) -> Result<(ModCell, ModCell)> {
    let b = base_of(m);
    let idb = mod_id(&m.dst)?;
    let comp = mod_compose(&idb, m)?;
    let (na, nb) = (m.src.n_objects(), m.dst.n_objects());
    let mut fwd = Vec::with_capacity(nb);
    let mut bwd = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut fr = Vec::with_capacity(na);
        let mut br = Vec::with_capacity(na);
        for x in 0..na {
            let legs: Vec<Hom2> = (0..nb).map(|v| m.lact[u][v][x].clone()).collect();
            let psi = copair(&b, &comp.parts[u][x].coprod, &legs, &m.comp[u][x])?;
            fr.push(b.coeq_factor(&comp.parts[u][x].coeq, &psi)?);

            let lu = b.lunitor(&m.comp[u][x])?;
            let ins = b.vcomp(&b.whisker_right(&m.dst.unit[u], &m.comp[u][x])?, &lu.bwd)?;
            br.push(b.vcomp(&comp.cocone_leg(u, x, u)?, &ins)?);
        }
        fwd.push(fr);
        bwd.push(br);
    }
    let comp_m = Arc::new(comp.composite);
    Ok((
        ModCell::new(comp_m.clone(), m.clone(), fwd)?,
        ModCell::new(m.clone(), comp_m, bwd)?,
    ))
}

/// Right unitor `(m∘1 ⇒ m, m ⇒ m∘1)`.
pub fn mod_runitor(m: &Arc<EModule>) -> Result<(ModCell, ModCell)> {
    let b = base_of(m);
    let ida = mod_id(&m.src)?;
    let comp = mod_compose(m, &ida)?;
    let (na, nb) = (m.src.n_objects(), m.dst.n_objects());
    let mut fwd = Vec::with_capacity(nb);
    let mut bwd = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut fr = Vec::with_capacity(na);
        let mut br = Vec::with_capacity(na);
        for x in 0..na {
            let legs: Vec<Hom2> = (0..na).map(|v| m.ract[u][v][x].clone()).collect();
            let psi = copair(&b, &comp.parts[u][x].coprod, &legs, &m.comp[u][x])?;
            fr.push(b.coeq_factor(&comp.parts[u][x].coeq, &psi)?);

            let ru = b.runitor(&m.comp[u][x])?;
            let ins = b.vcomp(&b.whisker_left(&m.comp[u][x], &m.src.unit[x])?, &ru.bwd)?;
            br.push(b.vcomp(&comp.cocone_leg(u, x, x)?, &ins)?);
        }
        fwd.push(fr);
        bwd.push(br);
    }
    let comp_m = Arc::new(comp.composite);
    Ok((
        ModCell::new(comp_m.clone(), m.clone(), fwd)?,
        ModCell::new(m.clone(), comp_m, bwd)?,
    ))
}

// ----------------------------------------------------------------------
// componentwise colimits (the derived base is itself cocomplete)
// ----------------------------------------------------------------------

/// Reflexive coequalizer of a parallel pair of module morphisms, computed
/// componentwise with the actions induced through the component cocones.
pub fn derived_coeq(s: &ModCell, t: &ModCell) -> Result<(EModule, ModCell)> {
    if s.src != t.src || s.dst != t.dst {
        return Err(CkError::boundary("derived_coeq: cells not parallel"));
    }
    let q = &s.dst;
    let b = base_of(q);
    let (na, nb) = (q.src.n_objects(), q.dst.n_objects());
    let mut ces = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.refl_coequalizer(&s.comp[u][x], &t.comp[u][x])?);
        }
        ces.push(row);
    }
    let comp: Vec<Vec<Hom1>> =
        ces.iter().map(|r| r.iter().map(|c| c.obj.clone()).collect()).collect();

    let mut ract = Vec::with_capacity(nb);
    let mut lact = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut rx = Vec::with_capacity(na);
        for x in 0..na {
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let psi = b.vcomp(&ces[u][y].cocone, &q.ract[u][x][y])?;
                ry.push(b.coeq_factor_rwhisk(&ces[u][x], &q.src.hom[x][y], &psi)?);
            }
            rx.push(ry);
        }
        ract.push(rx);
        let mut lv = Vec::with_capacity(nb);
        for v in 0..nb {
            let mut lx = Vec::with_capacity(na);
            for x in 0..na {
                let psi = b.vcomp(&ces[u][x].cocone, &q.lact[u][v][x])?;
                lx.push(b.coeq_factor_lwhisk(&q.dst.hom[u][v], &ces[v][x], &psi)?);
            }
            lv.push(lx);
        }
        lact.push(lv);
    }
    let obj =
        EModule::new(format!("{}/~", q.name), q.src.clone(), q.dst.clone(), comp, ract, lact)?;
    let cocone = ModCell::new(
        q.clone(),
        Arc::new(obj.clone()),
        ces.into_iter().map(|r| r.into_iter().map(|c| c.cocone).collect()).collect(),
    )?;
    Ok((obj, cocone))
}

/// Componentwise coproduct of parallel modules.
pub fn derived_coproduct(
    mods: &[EModule],
    src_c: &Arc<ECategory>,
    dst_c: &Arc<ECategory>,
) -> Result<(EModule, Vec<ModCell>)> {
    for m in mods {
        if m.src != *src_c || m.dst != *dst_c {
            return Err(CkError::boundary("derived_coproduct: summand boundary mismatch"));
        }
    }
    let b = &src_c.base;
    let (na, nb) = (src_c.n_objects(), dst_c.n_objects());
    let mut cps = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let summands: Vec<Hom1> = mods.iter().map(|m| m.comp[u][x].clone()).collect();
            row.push(b.coproduct(&summands, &src_c.extents[x], &dst_c.extents[u])?);
        }
        cps.push(row);
    }
    let comp: Vec<Vec<Hom1>> =
        cps.iter().map(|r| r.iter().map(|c| c.obj.clone()).collect()).collect();

    let mut ract = Vec::with_capacity(nb);
    let mut lact = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut rx = Vec::with_capacity(na);
        for x in 0..na {
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let legs = (0..mods.len())
                    .map(|i| b.vcomp(&cps[u][y].injections[i], &mods[i].ract[u][x][y]))
                    .collect::<Result<Vec<_>>>()?;
                if legs.is_empty() {
                    let s = b.compose1(&comp[u][x], &src_c.hom[x][y])?;
                    ry.push(b.hom2_from_initial(&s, &comp[u][y])?);
                } else {
                    ry.push(b.coprod_factor_rwhisk(&cps[u][x], &src_c.hom[x][y], &legs)?);
                }
            }
            rx.push(ry);
        }
        ract.push(rx);
        let mut lv = Vec::with_capacity(nb);
        for v in 0..nb {
            let mut lx = Vec::with_capacity(na);
            for x in 0..na {
                let legs = (0..mods.len())
                    .map(|i| b.vcomp(&cps[u][x].injections[i], &mods[i].lact[u][v][x]))
                    .collect::<Result<Vec<_>>>()?;
                if legs.is_empty() {
                    let s = b.compose1(&dst_c.hom[u][v], &comp[v][x])?;
                    lx.push(b.hom2_from_initial(&s, &comp[u][x])?);
                } else {
                    lx.push(b.coprod_factor_lwhisk(&dst_c.hom[u][v], &cps[v][x], &legs)?);
                }
            }
            lv.push(lx);
        }
        lact.push(lv);
    }
    let name = if mods.is_empty() {
        "0".to_string()
    } else {
        format!("⊕[{}]", mods.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(","))
    };
    let obj = EModule::new(name, src_c.clone(), dst_c.clone(), comp, ract, lact)?;
    let obj_arc = Arc::new(obj.clone());
    let mut injections = Vec::with_capacity(mods.len());
    for (i, m) in mods.iter().enumerate() {
        let cells: Vec<Vec<Hom2>> = cps
            .iter()
            .map(|r| r.iter().map(|c| c.injections[i].clone()).collect())
            .collect();
        injections.push(ModCell::new(Arc::new(m.clone()), obj_arc.clone(), cells)?);
    }
    Ok((obj, injections))
}

fn inner_coeq(obj: &EModule, cocone: &ModCell, u: usize, x: usize) -> Coequalizer {
    Coequalizer { obj: obj.comp[u][x].clone(), cocone: cocone.comp[u][x].clone() }
}

/// Factor `psi : q ⇒ z` through a componentwise coequalizer with quotient
/// module `obj` and cocone `cocone : q ⇒ obj`.
pub fn derived_coeq_factor(obj: &Arc<EModule>, cocone: &Hom2, psi: &ModCell) -> Result<ModCell> {
    let ccell = cocone.as_cell()?;
    if *ccell.dst != **obj || psi.src != ccell.src {
        return Err(CkError::boundary("derived_coeq_factor: cocone and psi do not line up"));
    }
    let b = base_of(obj);
    let (na, nb) = (obj.src.n_objects(), obj.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let ce = inner_coeq(obj, ccell, u, x);
            row.push(b.coeq_factor(&ce, &psi.comp[u][x])?);
        }
        comp.push(row);
    }
    ModCell::new(obj.clone(), psi.dst.clone(), comp)
}

/// Factor `psi : q∘k ⇒ z` through the right-whiskered coequalizer `obj∘k`.
pub fn derived_coeq_factor_rwhisk(
    obj: &Arc<EModule>,
    cocone: &Hom2,
    k: &EModule,
    psi: &ModCell,
) -> Result<ModCell> {
    let ccell = cocone.as_cell()?;
    if *ccell.dst != **obj {
        return Err(CkError::boundary("derived_coeq_factor_rwhisk: cocone does not land in obj"));
    }
    let b = base_of(obj);
    let q = &ccell.src;
    let ck = mod_compose(obj, k)?;
    let qk = mod_compose(q, k)?;
    if *psi.src != qk.composite {
        return Err(CkError::boundary("derived_coeq_factor_rwhisk: psi has wrong source"));
    }
    let (na, nmid, nb) = (k.src.n_objects(), k.dst.n_objects(), obj.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let mut legs = Vec::with_capacity(nmid);
            for x in 0..nmid {
                let lg = b.vcomp(&psi.comp[u][w], &qk.cocone_leg(u, w, x)?)?;
                let ce = inner_coeq(obj, ccell, u, x);
                legs.push(b.coeq_factor_rwhisk(&ce, &k.comp[x][w], &lg)?);
            }
            let combined = copair(&b, &ck.parts[u][w].coprod, &legs, &psi.dst.comp[u][w])?;
            row.push(b.coeq_factor(&ck.parts[u][w].coeq, &combined)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(ck.composite), psi.dst.clone(), comp)
}

/// Factor `psi : k∘q ⇒ z` through the left-whiskered coequalizer `k∘obj`.
pub fn derived_coeq_factor_lwhisk(
    k: &EModule,
    obj: &Arc<EModule>,
    cocone: &Hom2,
    psi: &ModCell,
) -> Result<ModCell> {
    let ccell = cocone.as_cell()?;
    if *ccell.dst != **obj {
        return Err(CkError::boundary("derived_coeq_factor_lwhisk: cocone does not land in obj"));
    }
    let b = base_of(obj);
    let q = &ccell.src;
    let kc = mod_compose(k, obj)?;
    let kq = mod_compose(k, q)?;
    if *psi.src != kq.composite {
        return Err(CkError::boundary("derived_coeq_factor_lwhisk: psi has wrong source"));
    }
    let (na, nmid, nb) = (obj.src.n_objects(), k.src.n_objects(), k.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let mut legs = Vec::with_capacity(nmid);
            for x in 0..nmid {
                let lg = b.vcomp(&psi.comp[u][w], &kq.cocone_leg(u, w, x)?)?;
                let ce = inner_coeq(obj, ccell, x, w);
                legs.push(b.coeq_factor_lwhisk(&k.comp[u][x], &ce, &lg)?);
            }
            let combined = copair(&b, &kc.parts[u][w].coprod, &legs, &psi.dst.comp[u][w])?;
            row.push(b.coeq_factor(&kc.parts[u][w].coeq, &combined)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(kc.composite), psi.dst.clone(), comp)
}

/// Copair legs through a componentwise coproduct.
pub fn derived_coprod_factor(
    obj: &Arc<EModule>,
    injs: &[ModCell],
    legs: &[ModCell],
) -> Result<ModCell> {
    if injs.len() != legs.len() || legs.is_empty() {
        return Err(CkError::boundary("derived_coprod_factor: mismatched or empty legs"));
    }
    let b = base_of(obj);
    let z = legs[0].dst.clone();
    let (na, nb) = (obj.src.n_objects(), obj.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let cp = Coproduct {
                obj: obj.comp[u][x].clone(),
                injections: injs.iter().map(|i| i.comp[u][x].clone()).collect(),
            };
            let ls: Vec<Hom2> = legs.iter().map(|l| l.comp[u][x].clone()).collect();
            row.push(b.coprod_factor(&cp, &ls)?);
        }
        comp.push(row);
    }
    ModCell::new(obj.clone(), z, comp)
}

/// Copair legs `m_i∘k ⇒ z` into `(Σm_i)∘k ⇒ z`.
pub fn derived_coprod_factor_rwhisk(
    obj: &Arc<EModule>,
    injs: &[ModCell],
    k: &EModule,
    legs: &[ModCell],
) -> Result<ModCell> {
    if injs.len() != legs.len() {
        return Err(CkError::boundary("derived_coprod_factor_rwhisk: wrong number of legs"));
    }
    let z = match legs.first() {
        Some(l) => l.dst.clone(),
        None => {
            return Err(CkError::boundary("empty whiskered coproduct: build directly"));
        }
    };
    let b = base_of(obj);
    let ck = mod_compose(obj, k)?;
    let sk = injs
        .iter()
        .map(|i| mod_compose(&i.src, k))
        .collect::<Result<Vec<_>>>()?;
    let (na, nmid, nb) = (k.src.n_objects(), k.dst.n_objects(), obj.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let mut xs = Vec::with_capacity(nmid);
            for x in 0..nmid {
                let cp = Coproduct {
                    obj: obj.comp[u][x].clone(),
                    injections: injs.iter().map(|i| i.comp[u][x].clone()).collect(),
                };
                let inner = (0..injs.len())
                    .map(|i| b.vcomp(&legs[i].comp[u][w], &sk[i].cocone_leg(u, w, x)?))
                    .collect::<Result<Vec<_>>>()?;
                xs.push(copair_rwhisk(&b, &cp, &k.comp[x][w], &inner, &z.comp[u][w])?);
            }
            let combined = copair(&b, &ck.parts[u][w].coprod, &xs, &z.comp[u][w])?;
            row.push(b.coeq_factor(&ck.parts[u][w].coeq, &combined)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(ck.composite), z, comp)
}

/// Copair legs `k∘m_i ⇒ z` into `k∘(Σm_i) ⇒ z`.
pub fn derived_coprod_factor_lwhisk(
    k: &EModule,
    obj: &Arc<EModule>,
    injs: &[ModCell],
    legs: &[ModCell],
) -> Result<ModCell> {
    if injs.len() != legs.len() {
        return Err(CkError::boundary("derived_coprod_factor_lwhisk: wrong number of legs"));
    }
    let z = match legs.first() {
        Some(l) => l.dst.clone(),
        None => {
            return Err(CkError::boundary("empty whiskered coproduct: build directly"));
        }
    };
    let b = base_of(obj);
    let kc = mod_compose(k, obj)?;
    let ks = injs
        .iter()
        .map(|i| mod_compose(k, &i.src))
        .collect::<Result<Vec<_>>>()?;
    let (na, nmid, nb) = (obj.src.n_objects(), k.src.n_objects(), k.dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for w in 0..na {
            let mut xs = Vec::with_capacity(nmid);
            for x in 0..nmid {
                let cp = Coproduct {
                    obj: obj.comp[x][w].clone(),
                    injections: injs.iter().map(|i| i.comp[x][w].clone()).collect(),
                };
                let inner = (0..injs.len())
                    .map(|i| b.vcomp(&legs[i].comp[u][w], &ks[i].cocone_leg(u, w, x)?))
                    .collect::<Result<Vec<_>>>()?;
                xs.push(copair_lwhisk(&b, &k.comp[u][x], &cp, &inner, &z.comp[u][w])?);
            }
            let combined = copair(&b, &kc.parts[u][w].coprod, &xs, &z.comp[u][w])?;
            row.push(b.coeq_factor(&kc.parts[u][w].coeq, &combined)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(kc.composite), z, comp)
}

// ----------------------------------------------------------------------
// bounded iso search
// ----------------------------------------------------------------------

/// Odometer increment over mixed radices; returns false once exhausted.
/// An empty index vector counts as a single (empty) assignment.
fn bump(idx: &mut [usize], len_at: impl Fn(usize) -> usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < len_at(i) {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Check every equivariance instance that becomes fully assigned when
/// component `(u, x)` is placed, scanning positions in `u`-major order.
fn equivariance_ok(
    b: &Base,
    mf: &EModule,
    mg: &EModule,
    table: &[Vec<Option<Hom2>>],
    u: usize,
    x: usize,
) -> Result<bool> {
    let a_cat = &mf.src;
    let b_cat = &mf.dst;
    let right = |p: usize, q: usize| -> Result<bool> {
        let (phi_q, phi_p) = match (&table[u][q], &table[u][p]) {
            (Some(a), Some(bb)) => (a, bb),
            _ => return Ok(true),
        };
        let lhs = b.vcomp(phi_q, &mf.ract[u][p][q])?;
        let rhs = b.vcomp(&mg.ract[u][p][q], &b.whisker_right(phi_p, &a_cat.hom[p][q])?)?;
        Ok(b.hom2_eq(&lhs, &rhs))
    };
    let left = |p: usize, q: usize| -> Result<bool> {
        let (phi_p, phi_q) = match (&table[p][x], &table[q][x]) {
            (Some(a), Some(bb)) => (a, bb),
            _ => return Ok(true),
        };
        let lhs = b.vcomp(phi_p, &mf.lact[p][q][x])?;
        let rhs = b.vcomp(&mg.lact[p][q][x], &b.whisker_left(&b_cat.hom[p][q], phi_q)?)?;
        Ok(b.hom2_eq(&lhs, &rhs))
    };
    for y in 0..=x {
        if !right(x, y)? || !right(y, x)? {
            return Ok(false);
        }
    }
    for v in 0..=u {
        if !left(u, v)? || !left(v, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn search_cells(
    mf: &Arc<EModule>,
    mg: &Arc<EModule>,
    invertible_only: bool,
    first_only: bool,
    budget: &mut Budget,
) -> Result<Vec<ModCell>> {
    if mf.src != mg.src || mf.dst != mg.dst {
        return Err(CkError::boundary("module cell search requires parallel modules"));
    }
    let b = base_of(mf);
    let (na, nb) = (mf.src.n_objects(), mf.dst.n_objects());
    let mut cands: Vec<Vec<Vec<Hom2>>> = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let cs = if invertible_only {
                b.enumerate_iso2(&mf.comp[u][x], &mg.comp[u][x], budget)?
            } else {
                b.enumerate_hom2(&mf.comp[u][x], &mg.comp[u][x], budget)?
            };
            if cs.is_empty() {
                return Ok(vec![]);
            }
            row.push(cs);
        }
        cands.push(row);
    }
    let mut table: Vec<Vec<Option<Hom2>>> = vec![vec![None; na]; nb];
    let mut out = Vec::new();
    dfs(&b, mf, mg, &cands, &mut table, 0, na, nb, first_only, &mut out, budget)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    b: &Base,
    mf: &Arc<EModule>,
    mg: &Arc<EModule>,
    cands: &[Vec<Vec<Hom2>>],
    table: &mut Vec<Vec<Option<Hom2>>>,
    pos: usize,
    na: usize,
    nb: usize,
    first_only: bool,
    out: &mut Vec<ModCell>,
    budget: &mut Budget,
) -> Result<()> {
    if pos == nb * na {
        let comp = table
            .iter()
            .map(|r| r.iter().map(|c| c.clone().expect("assigned")).collect())
            .collect();
        out.push(ModCell::new(mf.clone(), mg.clone(), comp)?);
        return Ok(());
    }
    let (u, x) = (pos / na, pos % na);
    for cand in &cands[u][x] {
        budget.spend(1, "module cell search")?;
        table[u][x] = Some(cand.clone());
        if equivariance_ok(b, mf, mg, table, u, x)? {
            dfs(b, mf, mg, cands, table, pos + 1, na, nb, first_only, out, budget)?;
            if first_only && !out.is_empty() {
                table[u][x] = None;
                return Ok(());
            }
        }
        table[u][x] = None;
    }
    Ok(())
}

/// All module morphisms `mf ⇒ mg`, in deterministic (lexicographic) order.
pub fn enumerate_modcells(
    mf: &Arc<EModule>,
    mg: &Arc<EModule>,
    budget: &mut Budget,
) -> Result<Vec<ModCell>> {
    search_cells(mf, mg, false, false, budget)
}

/// Decide `mf ≅ mg` and return a canonical witness pair. Components whose
/// carriers exceed `cap` abort with a budget error (reported upstream as
/// UNKNOWN) rather than silently answering no. The search is deterministic:
/// a componentwise canonical iso is tried first, then candidates are placed
/// in lexicographic order with equivariance checked incrementally, so
/// mismatched leg profiles prune a branch at its first component.
pub fn iso_modcell(
    mf: &Arc<EModule>,
    mg: &Arc<EModule>,
    cap: usize,
    budget: &mut Budget,
) -> Result<Option<(ModCell, ModCell)>> {
    if mf.src != mg.src || mf.dst != mg.dst {
        return Err(CkError::boundary("iso_modcell: modules not parallel"));
    }
    for h in mf.comp.iter().flatten().chain(mg.comp.iter().flatten()) {
        if h.carrier_size() > cap {
            return Err(CkError::Budget(format!(
                "iso search component carrier {} exceeds cap {cap}",
                h.carrier_size()
            )));
        }
    }
    let b = base_of(mf);
    let (na, nb) = (mf.src.n_objects(), mf.dst.n_objects());

    // Fast path: the canonical componentwise iso, when it happens to be
    // equivariant.
    let mut fwd = Vec::with_capacity(nb);
    let mut bwd = Vec::with_capacity(nb);
    'fast: {
        for u in 0..nb {
            let mut fr = Vec::with_capacity(na);
            let mut br = Vec::with_capacity(na);
            for x in 0..na {
                match b.iso1(&mf.comp[u][x], &mg.comp[u][x])? {
                    Some(iso) => {
                        fr.push(iso.fwd);
                        br.push(iso.bwd);
                    }
                    None => break 'fast,
                }
            }
            fwd.push(fr);
            bwd.push(br);
        }
        if fwd.len() == nb {
            let cell = ModCell::new(mf.clone(), mg.clone(), fwd)?;
            if crate::enriched::validate_modcell(&cell)?.ok() {
                let inv = ModCell::new(mg.clone(), mf.clone(), bwd)?;
                return Ok(Some((cell, inv)));
            }
        }
    }

    let found = search_cells(mf, mg, true, true, budget)?;
    match found.into_iter().next() {
        Some(cell) => {
            let inv = modcell_invert(&cell)?
                .ok_or_else(|| CkError::structural("invertible candidate failed to invert"))?;
            Ok(Some((cell, inv)))
        }
        None => Ok(None),
    }
}

// ----------------------------------------------------------------------
// representables
// ----------------------------------------------------------------------

/// The module `B(1, d)` represented by a functor `d : A → B`: components
/// `B(u, Dx)∘D_x`, with actions built from composition and the functor's
/// squares.
pub fn representable(d: &EFunctor) -> Result<EModule> {
    let a_cat = &d.src;
    let b_cat = &d.dst;
    let b = &a_cat.base;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.compose1(&b_cat.hom[u][d.ob[x]], &d.cells[x])?);
        }
        comp.push(row);
    }
    let mut ract = Vec::with_capacity(nb);
    let mut lact = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut rx = Vec::with_capacity(na);
        for x in 0..na {
            let dx = d.ob[x];
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let dy = d.ob[y];
                // (B(u,Dx)∘D_x)∘A(x,y) ⇒ B(u,Dx)∘(B(Dx,Dy)∘D_y) ⇒ (B(u,Dx)∘B(Dx,Dy))∘D_y ⇒ B(u,Dy)∘D_y
                let a1 = b.associator(&b_cat.hom[u][dx], &d.cells[x], &a_cat.hom[x][y])?;
                let sq = b.whisker_left(&b_cat.hom[u][dx], &d.sq[x][y])?;
                let a2 = b.associator(&b_cat.hom[u][dx], &b_cat.hom[dx][dy], &d.cells[y])?;
                let m = b.whisker_right(&b_cat.comp[u][dx][dy], &d.cells[y])?;
                ry.push(b.vcomp(&m, &b.vcomp(&a2.bwd, &b.vcomp(&sq, &a1.fwd)?)?)?);
            }
            rx.push(ry);
        }
        ract.push(rx);
        let mut lv = Vec::with_capacity(nb);
        for v in 0..nb {
            let mut lx = Vec::with_capacity(na);
            for x in 0..na {
                let dx = d.ob[x];
                let a1 = b.associator(&b_cat.hom[u][v], &b_cat.hom[v][dx], &d.cells[x])?;
                let m = b.whisker_right(&b_cat.comp[u][v][dx], &d.cells[x])?;
                lx.push(b.vcomp(&m, &a1.bwd)?);
            }
            lv.push(lx);
        }
        lact.push(lv);
    }
    EModule::new(format!("{}!", d.name), a_cat.clone(), b_cat.clone(), comp, ract, lact)
}

/// Mate `A(x,y)∘D_y^∨ ⇒ D_x^∨∘B(Dx,Dy)` of a functor square under the
/// component adjunctions `D ⊣ D^∨`.
fn square_mate(
    d: &EFunctor,
    radj: &[Hom1],
    units: &[Hom2],
    counits: &[Hom2],
    x: usize,
    y: usize,
) -> Result<Hom2> {
    let b = &d.src.base;
    let a_hom = &d.src.hom[x][y];
    let (dx, dy) = (d.ob[x], d.ob[y]);
    let bdxdy = &d.dst.hom[dx][dy];

    let start = b.compose1(a_hom, &radj[y])?;
    let s1 = b.lunitor(&start)?.bwd;
    let s2 = b.whisker_right(&units[x], &start)?;
    let from3 = Expr::pair(
        Expr::pair(Expr::leaf(&radj[x]), Expr::leaf(&d.cells[x])),
        Expr::pair(Expr::leaf(a_hom), Expr::leaf(&radj[y])),
    );
    let to3 = Expr::pair(
        Expr::pair(
            Expr::leaf(&radj[x]),
            Expr::pair(Expr::leaf(&d.cells[x]), Expr::leaf(a_hom)),
        ),
        Expr::leaf(&radj[y]),
    );
    let s3 = comp::reassociate(b, &from3, &to3)?;
    let s4 = b.whisker_right(&b.whisker_left(&radj[x], &d.sq[x][y])?, &radj[y])?;
    let from5 = Expr::pair(
        Expr::pair(
            Expr::leaf(&radj[x]),
            Expr::pair(Expr::leaf(bdxdy), Expr::leaf(&d.cells[y])),
        ),
        Expr::leaf(&radj[y]),
    );
    let to5 = Expr::pair(
        Expr::pair(Expr::leaf(&radj[x]), Expr::leaf(bdxdy)),
        Expr::pair(Expr::leaf(&d.cells[y]), Expr::leaf(&radj[y])),
    );
    let s5 = comp::reassociate(b, &from5, &to5)?;
    let k6 = b.compose1(&radj[x], bdxdy)?;
    let s6 = b.whisker_left(&k6, &counits[y])?;
    let s7 = b.runitor(&k6)?.fwd;
    let mut cell = s1;
    for step in [s2, s3, s4, s5, s6, s7] {
        cell = b.vcomp(&step, &cell)?;
    }
    Ok(cell)
}

/// The corepresentable `B(d, 1)`: components `D_x^∨∘B(Dx, u)` built from
/// the right adjoints of the functor's tight components, with the left
/// action transported through the mates of the functor squares.
pub fn corepresentable(d: &EFunctor) -> Result<EModule> {
    let a_cat = &d.src;
    let b_cat = &d.dst;
    let b = &a_cat.base;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());

    let mut radj = Vec::with_capacity(na);
    let mut units = Vec::with_capacity(na);
    let mut counits = Vec::with_capacity(na);
    for x in 0..na {
        let (r, eta, eps) = b.right_adjoint_tight(&d.cells[x])?;
        radj.push(r);
        units.push(eta);
        counits.push(eps);
    }

    let mut comp = Vec::with_capacity(na);
    for x in 0..na {
        let mut row = Vec::with_capacity(nb);
        for u in 0..nb {
            row.push(b.compose1(&radj[x], &b_cat.hom[d.ob[x]][u])?);
        }
        comp.push(row);
    }
    let mut ract = Vec::with_capacity(na);
    let mut lact = Vec::with_capacity(na);
    for x in 0..na {
        let dx = d.ob[x];
        let mut ru = Vec::with_capacity(nb);
        for u in 0..nb {
            let mut rv = Vec::with_capacity(nb);
            for v in 0..nb {
                let a1 = b.associator(&radj[x], &b_cat.hom[dx][u], &b_cat.hom[u][v])?;
                let m = b.whisker_left(&radj[x], &b_cat.comp[dx][u][v])?;
                rv.push(b.vcomp(&m, &a1.fwd)?);
            }
            ru.push(rv);
        }
        ract.push(ru);
        let mut ly = Vec::with_capacity(na);
        for y in 0..na {
            let dy = d.ob[y];
            let mate = square_mate(d, &radj, &units, &counits, x, y)?;
            let mut lu = Vec::with_capacity(nb);
            for u in 0..nb {
                // A(x,y)∘(D_y^∨∘B(Dy,u)) ⇒ (A(x,y)∘D_y^∨)∘B(Dy,u)
                //   ⇒ (D_x^∨∘B(Dx,Dy))∘B(Dy,u) ⇒ D_x^∨∘(B(Dx,Dy)∘B(Dy,u)) ⇒ D_x^∨∘B(Dx,u)
                let a1 = b.associator(&a_cat.hom[x][y], &radj[y], &b_cat.hom[dy][u])?;
                let w1 = b.whisker_right(&mate, &b_cat.hom[dy][u])?;
                let a2 = b.associator(&radj[x], &b_cat.hom[dx][dy], &b_cat.hom[dy][u])?;
                let w2 = b.whisker_left(&radj[x], &b_cat.comp[dx][dy][u])?;
                lu.push(b.vcomp(&w2, &b.vcomp(&a2.fwd, &b.vcomp(&w1, &a1.bwd)?)?)?);
            }
            ly.push(lu);
        }
        lact.push(ly);
    }
    EModule::new(format!("{}^", d.name), b_cat.clone(), a_cat.clone(), comp, ract, lact)
}

/// Unit and counit of the adjunction `representable(d) ⊣ corepresentable(d)`
/// in the module bicategory, assembled from the componentwise adjunctions.
pub fn representable_adjunction(d: &EFunctor) -> Result<(ModCell, ModCell)> {
    let a_cat = &d.src;
    let b_cat = &d.dst;
    let b = &a_cat.base;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());

    let mut radj = Vec::with_capacity(na);
    let mut units = Vec::with_capacity(na);
    let mut counits = Vec::with_capacity(na);
    for x in 0..na {
        let (r, eta, eps) = b.right_adjoint_tight(&d.cells[x])?;
        radj.push(r);
        units.push(eta);
        counits.push(eps);
    }

    let l = Arc::new(representable(d)?);
    let r = Arc::new(corepresentable(d)?);
    let rl = mod_compose(&r, &l)?;
    let lr = mod_compose(&l, &r)?;
    let ida = Arc::new(mod_id(a_cat)?);
    let idb = Arc::new(mod_id(b_cat)?);

    // unit : 1_A ⇒ R∘L, landing in the summand at the middle object Dy.
    let mut ucomp = Vec::with_capacity(na);
    for y in 0..na {
        let dy = d.ob[y];
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let hom = &a_cat.hom[y][x];
            let s1 = b.lunitor(hom)?.bwd;
            let s2 = b.whisker_right(&units[y], hom)?;
            let a1 = b.associator(&radj[y], &d.cells[y], hom)?;
            let s3 = b.whisker_left(&radj[y], &d.sq[y][x])?;
            let k5 = b.compose1(&b_cat.hom[dy][d.ob[x]], &d.cells[x])?;
            let xi = b.vcomp(
                &b.whisker_left(&radj[y], &b_cat.unit[dy])?,
                &b.runitor(&radj[y])?.bwd,
            )?;
            let s4 = b.whisker_right(&xi, &k5)?;
            let s5 = rl.cocone_leg(y, x, dy)?;
            let mut cell = s1;
            for step in [s2, a1.fwd, s3, s4, s5] {
                cell = b.vcomp(&step, &cell)?;
            }
            row.push(cell);
        }
        ucomp.push(row);
    }
    let unit = ModCell::new(ida, Arc::new(rl.composite), ucomp)?;

    // counit : L∘R ⇒ 1_B, collapsing each summand with the componentwise
    // counit.
    let mut ccomp = Vec::with_capacity(nb);
    for v in 0..nb {
        let mut row = Vec::with_capacity(nb);
        for u in 0..nb {
            let mut legs = Vec::with_capacity(na);
            for x in 0..na {
                let dx = d.ob[x];
                let p = &b_cat.hom[v][dx];
                let s = &b_cat.hom[dx][u];
                let from = Expr::pair(
                    Expr::pair(Expr::leaf(p), Expr::leaf(&d.cells[x])),
                    Expr::pair(Expr::leaf(&radj[x]), Expr::leaf(s)),
                );
                let to = Expr::pair(
                    Expr::leaf(p),
                    Expr::pair(
                        Expr::pair(Expr::leaf(&d.cells[x]), Expr::leaf(&radj[x])),
                        Expr::leaf(s),
                    ),
                );
                let t1 = comp::reassociate(b, &from, &to)?;
                let t2 = b.whisker_left(p, &b.whisker_right(&counits[x], s)?)?;
                let t3 = b.whisker_left(p, &b.lunitor(s)?.fwd)?;
                let t4 = &b_cat.comp[v][dx][u];
                let mut cell = t1;
                for step in [&t2, &t3, t4] {
                    cell = b.vcomp(step, &cell)?;
                }
                legs.push(cell);
            }
            let psi = copair(b, &lr.parts[v][u].coprod, &legs, &b_cat.hom[v][u])?;
            row.push(b.coeq_factor(&lr.parts[v][u].coeq, &psi)?);
        }
        ccomp.push(row);
    }
    let counit = ModCell::new(Arc::new(lr.composite), idb, ccomp)?;
    Ok((unit, counit))
}

/// Convert an enriched transformation `ϑ : d ⇒ e` into a module morphism
/// `representable(d) ⇒ representable(e)`.
pub fn trans_to_modcell(t: &ETransformation) -> Result<ModCell> {
    let d = &t.src;
    let e = &t.dst;
    let b_cat = &d.dst;
    let b = &d.src.base;
    let (na, nb) = (d.src.n_objects(), b_cat.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            let (dx, ex) = (d.ob[x], e.ob[x]);
            let w1 = b.whisker_left(&b_cat.hom[u][dx], &t.comp[x])?;
            let a1 = b.associator(&b_cat.hom[u][dx], &b_cat.hom[dx][ex], &e.cells[x])?;
            let w2 = b.whisker_right(&b_cat.comp[u][dx][ex], &e.cells[x])?;
            row.push(b.vcomp(&w2, &b.vcomp(&a1.bwd, &w1)?)?);
        }
        comp.push(row);
    }
    ModCell::new(Arc::new(representable(d)?), Arc::new(representable(e)?), comp)
}

/// Recover a transformation from a module morphism between representables
/// by evaluating at the identity of each `Dx`.
pub fn modcell_to_trans(c: &ModCell, d: &EFunctor, e: &EFunctor) -> Result<ETransformation> {
    let rd = representable(d)?;
    let re = representable(e)?;
    if *c.src != rd || *c.dst != re {
        return Err(CkError::boundary(
            "modcell_to_trans: cell is not between the given representables",
        ));
    }
    let b_cat = &d.dst;
    let b = &d.src.base;
    let na = d.src.n_objects();
    let mut comp = Vec::with_capacity(na);
    for x in 0..na {
        let dx = d.ob[x];
        let v1 = b.lunitor(&d.cells[x])?.bwd;
        let v2 = b.whisker_right(&b_cat.unit[dx], &d.cells[x])?;
        comp.push(b.vcomp(&c.comp[dx][x], &b.vcomp(&v2, &v1)?)?);
    }
    ETransformation::new(Arc::new(d.clone()), Arc::new(e.clone()), comp)
}

/// The canonical invertible comparison between `representable(e∘d)` and
/// `representable(e)∘representable(d)`, witnessing that representables
/// compose up to iso. Returns `(fwd, bwd)` with
/// `fwd : representable(e)∘representable(d) ⇒ representable(e∘d)`.
pub fn j_compose_witness(e: &EFunctor, d: &EFunctor) -> Result<(ModCell, ModCell)> {
    if d.dst != e.src {
        return Err(CkError::boundary("j_compose_witness: functors not composable"));
    }
    let b = &d.src.base;
    let a_cat = &d.src;
    let b_cat = &d.dst;
    let c_cat = &e.dst;
    let ed = crate::enriched::efun_compose(e, d)?;
    let repr_ed = Arc::new(representable(&ed)?);
    let le = representable(e)?;
    let ld = representable(d)?;
    let pair = mod_compose(&le, &ld)?;
    let (na, nmid, nc) = (a_cat.n_objects(), b_cat.n_objects(), c_cat.n_objects());

    let mut fwd = Vec::with_capacity(nc);
    let mut bwd = Vec::with_capacity(nc);
    for w in 0..nc {
        let mut fr = Vec::with_capacity(na);
        let mut br = Vec::with_capacity(na);
        for x in 0..na {
            let dx = d.ob[x];
            let edx = e.ob[dx];
            let s = &d.cells[x];

            let mut legs = Vec::with_capacity(nmid);
            for u in 0..nmid {
                let eu = e.ob[u];
                let p = &c_cat.hom[w][eu];
                let q = &e.cells[u];
                let r = &b_cat.hom[u][dx];
                let from = Expr::pair(
                    Expr::pair(Expr::leaf(p), Expr::leaf(q)),
                    Expr::pair(Expr::leaf(r), Expr::leaf(s)),
                );
                let mid = Expr::pair(
                    Expr::leaf(p),
                    Expr::pair(Expr::pair(Expr::leaf(q), Expr::leaf(r)), Expr::leaf(s)),
                );
                let g1 = comp::reassociate(b, &from, &mid)?;
                let g2 = b.whisker_left(p, &b.whisker_right(&e.sq[u][dx], s)?)?;
                let cmid = &c_cat.hom[eu][edx];
                let from3 = Expr::pair(
                    Expr::leaf(p),
                    Expr::pair(
                        Expr::pair(Expr::leaf(cmid), Expr::leaf(&e.cells[dx])),
                        Expr::leaf(s),
                    ),
                );
                let to3 = Expr::pair(
                    Expr::pair(Expr::leaf(p), Expr::leaf(cmid)),
                    Expr::pair(Expr::leaf(&e.cells[dx]), Expr::leaf(s)),
                );
                let g3 = comp::reassociate(b, &from3, &to3)?;
                let es_comp = b.compose1(&e.cells[dx], s)?;
                let g4 = b.whisker_right(&c_cat.comp[w][eu][edx], &es_comp)?;
                let mut cell = g1;
                for step in [g2, g3, g4] {
                    cell = b.vcomp(&step, &cell)?;
                }
                legs.push(cell);
            }
            let psi = copair(b, &pair.parts[w][x].coprod, &legs, &repr_ed.comp[w][x])?;
            fr.push(b.coeq_factor(&pair.parts[w][x].coeq, &psi)?);

            // bwd: land in the summand at u = Dx by inserting B(Dx,Dx).
            let p = &c_cat.hom[w][edx];
            let q2 = &e.cells[dx];
            let from = Expr::pair(Expr::leaf(p), Expr::pair(Expr::leaf(q2), Expr::leaf(s)));
            let to = Expr::pair(Expr::pair(Expr::leaf(p), Expr::leaf(q2)), Expr::leaf(s));
            let h1 = comp::reassociate(b, &from, &to)?;
            let zeta = b.vcomp(&b.whisker_right(&b_cat.unit[dx], s)?, &b.lunitor(s)?.bwd)?;
            let pq = b.compose1(p, q2)?;
            let h2 = b.whisker_left(&pq, &zeta)?;
            let h3 = pair.cocone_leg(w, x, dx)?;
            br.push(b.vcomp(&h3, &b.vcomp(&h2, &h1)?)?);
        }
        fwd.push(fr);
        bwd.push(br);
    }
    let pair_m = Arc::new(pair.composite);
    Ok((
        ModCell::new(pair_m.clone(), repr_ed.clone(), fwd)?,
        ModCell::new(repr_ed, pair_m, bwd)?,
    ))
}

// ----------------------------------------------------------------------
// tightness, adjunctions, equivalences
// ----------------------------------------------------------------------

/// Result of the representability search.
#[derive(Debug, Clone)]
pub enum Tightening {
    /// `fwd : representable(functor) ⇒ m`, `bwd` its inverse.
    Found { functor: EFunctor, fwd: ModCell, bwd: ModCell },
    /// The whole candidate space was enumerated without a witness.
    NotRepresentable { searched: usize },
    /// Caps or budget cut the search short; no verdict.
    Unknown { reason: String },
}

/// Exhaustive, deterministic search for a functor presenting `m` as a
/// representable: object maps, then tight components, then squares, each in
/// lexicographic order, so the first witness found is canonical.
pub fn find_tightening(m: &Arc<EModule>, cap: usize, budget: &mut Budget) -> Result<Tightening> {
    let a_cat = &m.src;
    let b_cat = &m.dst;
    let b = &a_cat.base;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let mut searched = 0usize;

    let mut per_obj: Vec<Vec<(usize, Hom1)>> = Vec::with_capacity(na);
    for x in 0..na {
        let mut cs = Vec::new();
        for t in 0..nb {
            let cells = match b.enumerate_tight_cells(&a_cat.extents[x], &b_cat.extents[t], budget)
            {
                Ok(v) => v,
                Err(CkError::Budget(reason)) => return Ok(Tightening::Unknown { reason }),
                Err(e) => return Err(e),
            };
            for c in cells {
                cs.push((t, c));
            }
        }
        cs.sort_by_key(|(t, _)| *t);
        per_obj.push(cs);
    }
    if per_obj.iter().any(|v| v.is_empty()) {
        return Ok(Tightening::NotRepresentable { searched });
    }

    let mut idx = vec![0usize; na];
    loop {
        let ob: Vec<usize> = (0..na).map(|x| per_obj[x][idx[x]].0).collect();
        let cells: Vec<Hom1> = (0..na).map(|x| per_obj[x][idx[x]].1.clone()).collect();

        let mut sq_cands: Vec<Vec<Hom2>> = Vec::with_capacity(na * na);
        let mut feasible = true;
        'blocks: for x in 0..na {
            for y in 0..na {
                let src = b.compose1(&cells[x], &a_cat.hom[x][y])?;
                let dst = b.compose1(&b_cat.hom[ob[x]][ob[y]], &cells[y])?;
                let cs = match b.enumerate_hom2(&src, &dst, budget) {
                    Ok(v) => v,
                    Err(CkError::Budget(reason)) => return Ok(Tightening::Unknown { reason }),
                    Err(e) => return Err(e),
                };
                if cs.is_empty() {
                    feasible = false;
                    break 'blocks;
                }
                sq_cands.push(cs);
            }
        }

        if feasible {
            let mut sidx = vec![0usize; na * na];
            loop {
                searched += 1;
                if let Err(CkError::Budget(reason)) = budget.spend(1, "tightening candidates") {
                    return Ok(Tightening::Unknown { reason });
                }
                let sq: Vec<Vec<Hom2>> = (0..na)
                    .map(|x| (0..na).map(|y| sq_cands[x * na + y][sidx[x * na + y]].clone()).collect())
                    .collect();
                let fun = EFunctor::new(
                    format!("tighten({})", m.name),
                    a_cat.clone(),
                    b_cat.clone(),
                    ob.clone(),
                    cells.clone(),
                    sq,
                )?;
                if validate_efunctor(&fun)?.ok() {
                    let rep = Arc::new(representable(&fun)?);
                    match iso_modcell(&rep, m, cap, budget) {
                        Ok(Some((fwd, bwd))) => {
                            return Ok(Tightening::Found { functor: fun, fwd, bwd })
                        }
                        Ok(None) => {}
                        Err(CkError::Budget(reason)) => return Ok(Tightening::Unknown { reason }),
                        Err(e) => return Err(e),
                    }
                }
                if !bump(&mut sidx, |i| sq_cands[i].len()) {
                    break;
                }
            }
        }
        if !bump(&mut idx, |i| per_obj[i].len()) {
            break;
        }
    }
    Ok(Tightening::NotRepresentable { searched })
}

/// Data of an adjunction `left ⊣ right` in the module bicategory.
#[derive(Debug, Clone)]
pub struct AdjunctionWitness {
    pub left: EModule,
    pub right: EModule,
    /// `1 ⇒ right∘left`
    pub unit: ModCell,
    /// `left∘right ⇒ 1`
    pub counit: ModCell,
}

fn cell_chain(cells: Vec<ModCell>) -> Result<ModCell> {
    let mut it = cells.into_iter();
    let first = it.next().ok_or_else(|| CkError::structural("empty cell chain"))?;
    it.try_fold(first, |acc, next| modcell_vcomp(&next, &acc))
}

/// Verify both triangle identities of a claimed adjunction, pasting through
/// the computed coherence cells.
pub fn adjunction_check(
    l: &Arc<EModule>,
    r: &Arc<EModule>,
    unit: &ModCell,
    counit: &ModCell,
) -> Result<bool> {
    if l.src != r.dst || l.dst != r.src {
        return Err(CkError::boundary("adjunction_check: boundaries do not match"));
    }
    let ida = Arc::new(mod_id(&l.src)?);
    let idb = Arc::new(mod_id(&l.dst)?);
    let rl = mod_compose(r, l)?.composite;
    let lr = mod_compose(l, r)?.composite;
    if *unit.src != *ida || *unit.dst != rl {
        return Err(CkError::boundary("adjunction_check: unit has wrong boundary"));
    }
    if *counit.src != lr || *counit.dst != *idb {
        return Err(CkError::boundary("adjunction_check: counit has wrong boundary"));
    }

    let (_, ru_b) = mod_runitor(l)?;
    let (lu_f, _) = mod_lunitor(l)?;
    let (_, assoc_l) = mod_associator(l, r, l)?;
    let tri_l = cell_chain(vec![
        ru_b,
        mod_whisker_left(l, unit)?,
        assoc_l,
        mod_whisker_right(counit, l)?,
        lu_f,
    ])?;
    if tri_l != modcell_id(l)? {
        return Ok(false);
    }

    let (_, lu_b) = mod_lunitor(r)?;
    let (ru_f, _) = mod_runitor(r)?;
    let (assoc_r, _) = mod_associator(r, l, r)?;
    let tri_r = cell_chain(vec![
        lu_b,
        mod_whisker_right(unit, r)?,
        assoc_r,
        mod_whisker_left(r, counit)?,
        ru_f,
    ])?;
    Ok(tri_r == modcell_id(r)?)
}

/// Outcome of a bounded search that can prove a negative.
#[derive(Debug, Clone)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The candidate space was provably covered: a definitive no.
    Exhausted { searched: usize },
    /// Caps or budget prevented a verdict.
    Unknown { reason: String },
}

/// Search for a right adjoint of `l` by tightening: if `l ≅ representable(d)`,
/// the right adjoint is `corepresentable(d)` with unit/counit transported
/// along the tightening iso.
pub fn find_right_adjoint(
    l: &Arc<EModule>,
    cap: usize,
    budget: &mut Budget,
) -> Result<SearchOutcome<AdjunctionWitness>> {
    match find_tightening(l, cap, budget)? {
        Tightening::Found { functor, fwd, bwd } => {
            let r = corepresentable(&functor)?;
            let (unit0, counit0) = representable_adjunction(&functor)?;
            let unit = modcell_vcomp(&mod_whisker_left(&r, &fwd)?, &unit0)?;
            let counit = modcell_vcomp(&counit0, &mod_whisker_right(&bwd, &r)?)?;
            Ok(SearchOutcome::Found(AdjunctionWitness {
                left: l.as_ref().clone(),
                right: r,
                unit,
                counit,
            }))
        }
        Tightening::NotRepresentable { searched } => Ok(SearchOutcome::Exhausted { searched }),
        Tightening::Unknown { reason } => Ok(SearchOutcome::Unknown { reason }),
    }
}

/// A pseudoinverse with both composite isomorphisms.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub pseudoinverse: EModule,
    /// `1_A ⇒ s∘t` and back
    pub unit_fwd: ModCell,
    pub unit_bwd: ModCell,
    /// `t∘s ⇒ 1_B` and back
    pub counit_fwd: ModCell,
    pub counit_bwd: ModCell,
}

fn try_pseudoinverse(
    t: &Arc<EModule>,
    s: &EModule,
    cap: usize,
    budget: &mut Budget,
) -> Result<Option<EquivalenceWitness>> {
    if s.src != t.dst || s.dst != t.src {
        return Ok(None);
    }
    let s_arc = Arc::new(s.clone());
    let ida = Arc::new(mod_id(&t.src)?);
    let st = Arc::new(mod_compose(&s_arc, t)?.composite);
    let Some((unit_fwd, unit_bwd)) = iso_modcell(&ida, &st, cap, budget)? else {
        return Ok(None);
    };
    let idb = Arc::new(mod_id(&t.dst)?);
    let ts = Arc::new(mod_compose(t, &s_arc)?.composite);
    let Some((counit_fwd, counit_bwd)) = iso_modcell(&ts, &idb, cap, budget)? else {
        return Ok(None);
    };
    Ok(Some(EquivalenceWitness {
        pseudoinverse: s.clone(),
        unit_fwd,
        unit_bwd,
        counit_fwd,
        counit_bwd,
    }))
}

// quantale lattice helpers: finite scans are exact
fn q_meet(q: &Quantale, a: u8, b: u8) -> u8 {
    let mut m = q.bottom;
    for z in 0..q.size as u8 {
        if q.le(z, a) && q.le(z, b) {
            m = q.j(m, z);
        }
    }
    m
}

/// `⋁ { y : x⊗y ≤ z }`
fn q_ldiv(q: &Quantale, x: u8, z: u8) -> u8 {
    let mut m = q.bottom;
    for y in 0..q.size as u8 {
        if q.le(q.t(x, y), z) {
            m = q.j(m, y);
        }
    }
    m
}

/// `⋁ { y : y⊗x ≤ z }`
fn q_rdiv(q: &Quantale, z: u8, x: u8) -> u8 {
    let mut m = q.bottom;
    for y in 0..q.size as u8 {
        if q.le(q.t(y, x), z) {
            m = q.j(m, y);
        }
    }
    m
}

/// Over a quantale base the greatest candidate pseudoinverse is computable
/// by residuation: start from the residual bounds imposed by
/// `s∘t ≤ 1` and `t∘s ≤ 1`, then shrink to the greatest sub-bimodule. Any
/// pseudoinverse is ≤ this one, so if this one fails, none exists.
fn quantale_pseudoinverse(t: &EModule, q: &Quantale) -> Result<EModule> {
    let a_cat = &t.src;
    let b_cat = &t.dst;
    let b = &a_cat.base;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let adim: Vec<usize> = a_cat.extents.iter().map(|e| e.dim()).collect();
    let bdim: Vec<usize> = b_cat.extents.iter().map(|e| e.dim()).collect();
    let tmat = |u: usize, x: usize| t.comp[u][x].as_mat();
    let amat = |x: usize, y: usize| a_cat.hom[x][y].as_mat();
    let bmat = |u: usize, v: usize| b_cat.hom[u][v].as_mat();

    // s[x][u] : rows adim[x] × cols bdim[u]
    let mut s: Vec<Vec<Vec<u8>>> = Vec::with_capacity(na);
    for x in 0..na {
        let mut row = Vec::with_capacity(nb);
        for u in 0..nb {
            let mut entries = Vec::with_capacity(adim[x] * bdim[u]);
            for i in 0..adim[x] {
                for j in 0..bdim[u] {
                    // s(x,u)[i,j]⊗t(u,x2)[j,m] ≤ A(x,x2)[i,m]
                    let mut bound = q.unit.max(q.bottom);
                    let mut first = true;
                    for x2 in 0..na {
                        let tm = tmat(u, x2)?;
                        let am = amat(x, x2)?;
                        for mm in 0..adim[x2] {
                            let r = q_rdiv(q, am.at(i, mm), tm.at(j, mm));
                            bound = if first { r } else { q_meet(q, bound, r) };
                            first = false;
                        }
                    }
                    // t(u2,x)[p,i]⊗s(x,u)[i,j] ≤ B(u2,u)[p,j]
                    for u2 in 0..nb {
                        let tm = tmat(u2, x)?;
                        let bm = bmat(u2, u)?;
                        for p in 0..bdim[u2] {
                            let r = q_ldiv(q, tm.at(p, i), bm.at(p, j));
                            bound = if first { r } else { q_meet(q, bound, r) };
                            first = false;
                        }
                    }
                    if first {
                        // no constraints at all: take the top element
                        let mut top = q.bottom;
                        for z in 0..q.size as u8 {
                            top = q.j(top, z);
                        }
                        bound = top;
                    }
                    entries.push(bound);
                }
            }
            row.push(entries);
        }
        s.push(row);
    }

    // greatest sub-bimodule: shrink until both action inequalities hold
    loop {
        let mut changed = false;
        for x in 0..na {
            for u in 0..nb {
                for i in 0..adim[x] {
                    for j in 0..bdim[u] {
                        let mut val = s[x][u][i * bdim[u] + j];
                        // s(x,u)[i,j]⊗B(u,v)[j,j2] ≤ s(x,v)[i,j2]
                        for v in 0..nb {
                            let bm = bmat(u, v)?;
                            for j2 in 0..bdim[v] {
                                let target = s[x][v][i * bdim[v] + j2];
                                val = q_meet(q, val, q_rdiv(q, target, bm.at(j, j2)));
                            }
                        }
                        // A(y,x)[i2,i]⊗s(x,u)[i,j] ≤ s(y,u)[i2,j]
                        for y in 0..na {
                            let am = amat(y, x)?;
                            for i2 in 0..adim[y] {
                                let target = s[y][u][i2 * bdim[u] + j];
                                val = q_meet(q, val, q_ldiv(q, am.at(i2, i), target));
                            }
                        }
                        if val != s[x][u][i * bdim[u] + j] {
                            s[x][u][i * bdim[u] + j] = val;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut comp = Vec::with_capacity(na);
    for x in 0..na {
        let mut row = Vec::with_capacity(nb);
        for u in 0..nb {
            row.push(Hom1 {
                src: b_cat.extents[u].clone(),
                dst: a_cat.extents[x].clone(),
                data: H1::Mat(Mat { rows: adim[x], cols: bdim[u], e: s[x][u].clone() }),
            });
        }
        comp.push(row);
    }
    let mut ract = Vec::with_capacity(na);
    let mut lact = Vec::with_capacity(na);
    for x in 0..na {
        let mut ru = Vec::with_capacity(nb);
        for u in 0..nb {
            let mut rv = Vec::with_capacity(nb);
            for v in 0..nb {
                let src = b.compose1(&comp[x][u], &b_cat.hom[u][v])?;
                rv.push(b.hom2_le(&src, &comp[x][v])?);
            }
            ru.push(rv);
        }
        ract.push(ru);
        let mut ly = Vec::with_capacity(na);
        for y in 0..na {
            let mut lu = Vec::with_capacity(nb);
            for u in 0..nb {
                let src = b.compose1(&a_cat.hom[x][y], &comp[y][u])?;
                lu.push(b.hom2_le(&src, &comp[x][u])?);
            }
            ly.push(lu);
        }
        lact.push(ly);
    }
    EModule::new(format!("{}~", t.name), b_cat.clone(), a_cat.clone(), comp, ract, lact)
}

/// Collapse a span-enriched category to its relational shadow over the
/// Boolean quantale: same extents, "is there an arrow" matrices, posetal
/// structure cells. Collapse preserves composites, identities and isos, so
/// a definitive non-equivalence downstairs refutes equivalence upstairs.
pub(crate) fn rel_collapse_ecat(c: &ECategory) -> Result<Arc<ECategory>> {
    if !matches!(c.base.kind(), Kind::SpanFinSet) {
        return Err(CkError::structural("rel_collapse_ecat expects a span-enriched category"));
    }
    let bb = Base::boolean_quantale(c.base.arity());
    let n = c.n_objects();
    let extents: Vec<BaseObj> = c.extents.iter().map(|e| BaseObj::Set(e.dim())).collect();
    let mut hom = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(span_to_rel(&c.hom[x][y])?);
        }
        hom.push(row);
    }
    let mut comp = Vec::with_capacity(n);
    let mut unit = Vec::with_capacity(n);
    for x in 0..n {
        let mut cy = Vec::with_capacity(n);
        for y in 0..n {
            let mut cz = Vec::with_capacity(n);
            for z in 0..n {
                let src = bb.compose1(&hom[x][y], &hom[y][z])?;
                cz.push(bb.hom2_le(&src, &hom[x][z])?);
            }
            cy.push(cz);
        }
        comp.push(cy);
        unit.push(bb.hom2_le(&bb.id1(&extents[x])?, &hom[x][x])?);
    }
    Ok(Arc::new(ECategory::new(
        format!("{}@rel", c.name),
        bb,
        c.obj_names.clone(),
        extents,
        hom,
        comp,
        unit,
    )?))
}

pub(crate) fn rel_collapse_module(
    m: &EModule,
    src: &Arc<ECategory>,
    dst: &Arc<ECategory>,
) -> Result<EModule> {
    let bb = &src.base;
    let (na, nb) = (src.n_objects(), dst.n_objects());
    let mut comp = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(span_to_rel(&m.comp[u][x])?);
        }
        comp.push(row);
    }
    let mut ract = Vec::with_capacity(nb);
    let mut lact = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut rx = Vec::with_capacity(na);
        for x in 0..na {
            let mut ry = Vec::with_capacity(na);
            for y in 0..na {
                let s = bb.compose1(&comp[u][x], &src.hom[x][y])?;
                ry.push(bb.hom2_le(&s, &comp[u][y])?);
            }
            rx.push(ry);
        }
        ract.push(rx);
        let mut lv = Vec::with_capacity(nb);
        for v in 0..nb {
            let mut lx = Vec::with_capacity(na);
            for x in 0..na {
                let s = bb.compose1(&dst.hom[u][v], &comp[v][x])?;
                lx.push(bb.hom2_le(&s, &comp[u][x])?);
            }
            lv.push(lx);
        }
        lact.push(lv);
    }
    EModule::new(format!("{}@rel", m.name), src.clone(), dst.clone(), comp, ract, lact)
}

pub(crate) fn span_to_rel(h: &Hom1) -> Result<Hom1> {
    let s = h.as_span()?;
    let rows = h.dst.dim();
    let cols = h.src.dim();
    let mut e = vec![0u8; rows * cols];
    for k in 0..s.apex {
        e[s.right[k] * cols + s.left[k]] = 1;
    }
    Ok(Hom1 {
        src: BaseObj::Set(cols),
        dst: BaseObj::Set(rows),
        data: H1::Mat(Mat { rows, cols, e }),
    })
}

/// All modules `src ⇸ dst` with component carriers bounded by `cap`, in
/// deterministic order. Intended for small instances; the budget keeps
/// blowups honest.
pub fn enum_modules(
    src: &Arc<ECategory>,
    dst: &Arc<ECategory>,
    cap: usize,
    budget: &mut Budget,
) -> Result<Vec<EModule>> {
    if src.base != dst.base {
        return Err(CkError::boundary("enum_modules: categories over different bases"));
    }
    let b = &src.base;
    let (na, nb) = (src.n_objects(), dst.n_objects());
    let mut comp_cands: Vec<Vec<Vec<Hom1>>> = Vec::with_capacity(nb);
    for u in 0..nb {
        let mut row = Vec::with_capacity(na);
        for x in 0..na {
            row.push(b.enumerate_hom1(&src.extents[x], &dst.extents[u], cap, budget)?);
        }
        comp_cands.push(row);
    }
    let positions = nb * na;
    let mut out = Vec::new();
    if comp_cands.iter().flatten().any(|v| v.is_empty()) && positions > 0 {
        return Ok(out);
    }
    let mut idx = vec![0usize; positions];
    loop {
        let comp: Vec<Vec<Hom1>> = (0..nb)
            .map(|u| (0..na).map(|x| comp_cands[u][x][idx[u * na + x]].clone()).collect())
            .collect();
        'carrier: {
            let mut rblocks = Vec::new();
            for u in 0..nb {
                for x in 0..na {
                    for y in 0..na {
                        let s = b.compose1(&comp[u][x], &src.hom[x][y])?;
                        let mut cs = b.enumerate_hom2(&s, &comp[u][y], budget)?;
                        if x == y {
                            // the diagonal block is pinned by the right unit
                            // law, which mentions no other block — filtering
                            // here collapses the cartesian product below
                            let insert = b.whisker_left(&comp[u][x], &src.unit[x])?;
                            let want = b.runitor(&comp[u][x])?.fwd;
                            let mut kept = Vec::new();
                            for c in cs {
                                if b.hom2_eq(&b.vcomp(&c, &insert)?, &want) {
                                    kept.push(c);
                                }
                            }
                            cs = kept;
                        }
                        if cs.is_empty() {
                            break 'carrier;
                        }
                        rblocks.push(cs);
                    }
                }
            }
            let mut lblocks = Vec::new();
            for u in 0..nb {
                for v in 0..nb {
                    for x in 0..na {
                        let s = b.compose1(&dst.hom[u][v], &comp[v][x])?;
                        let mut cs = b.enumerate_hom2(&s, &comp[u][x], budget)?;
                        if u == v {
                            // same pruning with the left unit law
                            let insert = b.whisker_right(&dst.unit[u], &comp[u][x])?;
                            let want = b.lunitor(&comp[u][x])?.fwd;
                            let mut kept = Vec::new();
                            for c in cs {
                                if b.hom2_eq(&b.vcomp(&c, &insert)?, &want) {
                                    kept.push(c);
                                }
                            }
                            cs = kept;
                        }
                        if cs.is_empty() {
                            break 'carrier;
                        }
                        lblocks.push(cs);
                    }
                }
            }
            let nblocks = rblocks.len() + lblocks.len();
            let len_at = |i: usize| {
                if i < rblocks.len() {
                    rblocks[i].len()
                } else {
                    lblocks[i - rblocks.len()].len()
                }
            };
            let mut aidx = vec![0usize; nblocks];
            loop {
                budget.spend(1, "module enumeration")?;
                let mut k = 0;
                let mut ract = Vec::with_capacity(nb);
                for _u in 0..nb {
                    let mut rx = Vec::with_capacity(na);
                    for _x in 0..na {
                        let mut ry = Vec::with_capacity(na);
                        for _y in 0..na {
                            ry.push(rblocks[k][aidx[k]].clone());
                            k += 1;
                        }
                        rx.push(ry);
                    }
                    ract.push(rx);
                }
                let mut k2 = 0;
                let mut lact = Vec::with_capacity(nb);
                for _u in 0..nb {
                    let mut lv = Vec::with_capacity(nb);
                    for _v in 0..nb {
                        let mut lx = Vec::with_capacity(na);
                        for _x in 0..na {
                            lx.push(lblocks[k2][aidx[rblocks.len() + k2]].clone());
                            k2 += 1;
                        }
                        lv.push(lx);
                    }
                    lact.push(lv);
                }
                let m = EModule::new(
                    "candidate",
                    src.clone(),
                    dst.clone(),
                    comp.clone(),
                    ract,
                    lact,
                )?;
                if validate_emodule(&m)?.ok() {
                    out.push(m);
                }
                if !bump(&mut aidx, len_at) {
                    break;
                }
            }
        }
        if !bump(&mut idx, |i| comp_cands[i / na][i % na].len()) {
            break;
        }
    }
    Ok(out)
}

/// Decide whether `t : A ⇸ B` is an equivalence, i.e. has a pseudoinverse
/// with both composites isomorphic to identities.
///
/// Constructive candidates (the identity, the corepresentable of a
/// tightening) are tried first. Over a quantale base the answer is then
/// exact by residuation, so `Exhausted` is a definitive no. Over spans a
/// definitive no can still come from the Boolean collapse; otherwise a
/// bounded carrier search either finds a witness or returns `Unknown`.
pub fn module_equivalence(
    t: &Arc<EModule>,
    cap: usize,
    budget: &mut Budget,
) -> Result<SearchOutcome<EquivalenceWitness>> {
    let a_cat = &t.src;
    let b_cat = &t.dst;
    let b = &a_cat.base;
    let mut searched = 0usize;

    let mut candidates: Vec<EModule> = Vec::new();
    if a_cat == b_cat {
        candidates.push(mod_id(a_cat)?);
    }
    match find_tightening(t, cap, budget) {
        Ok(Tightening::Found { functor, .. }) => {
            if let Ok(co) = corepresentable(&functor) {
                candidates.push(co);
            }
        }
        Ok(_) => {}
        Err(CkError::Budget(_)) => {}
        Err(e) => return Err(e),
    }
    for s in &candidates {
        searched += 1;
        match try_pseudoinverse(t, s, cap, budget) {
            Ok(Some(w)) => return Ok(SearchOutcome::Found(w)),
            Ok(None) => {}
            Err(CkError::Budget(reason)) => return Ok(SearchOutcome::Unknown { reason }),
            Err(e) => return Err(e),
        }
    }

    match b.kind() {
        Kind::BoolQ(_) | Kind::FinQ(_) => {
            let q = b.quantale().expect("quantale base").clone();
            let s = quantale_pseudoinverse(t, &q)?;
            searched += 1;
            match try_pseudoinverse(t, &s, cap, budget)? {
                Some(w) => Ok(SearchOutcome::Found(w)),
                None => Ok(SearchOutcome::Exhausted { searched }),
            }
        }
        Kind::SpanFinSet => {
            let ca = rel_collapse_ecat(a_cat)?;
            let cb = rel_collapse_ecat(b_cat)?;
            let tc = Arc::new(rel_collapse_module(t, &ca, &cb)?);
            let qq = Quantale::boolean();
            let sc = quantale_pseudoinverse(&tc, &qq)?;
            if try_pseudoinverse(&tc, &sc, cap, budget)?.is_none() {
                return Ok(SearchOutcome::Exhausted { searched });
            }
            let all = match enum_modules(b_cat, a_cat, cap, budget) {
                Ok(v) => v,
                Err(CkError::Budget(reason)) => return Ok(SearchOutcome::Unknown { reason }),
                Err(e) => return Err(e),
            };
            for s in &all {
                searched += 1;
                match try_pseudoinverse(t, s, cap, budget) {
                    Ok(Some(w)) => return Ok(SearchOutcome::Found(w)),
                    Ok(None) => {}
                    Err(CkError::Budget(reason)) => return Ok(SearchOutcome::Unknown { reason }),
                    Err(e) => return Err(e),
                }
            }
            Ok(SearchOutcome::Unknown {
                reason: format!(
                    "no pseudoinverse among {searched} candidates with component carriers ≤ {cap}; larger carriers not excluded"
                ),
            })
        }
        Kind::ModDerived(_) => Ok(SearchOutcome::Unknown {
            reason: "pseudoinverse search over a derived base is not enumerable".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{ArityClass, DEFAULT_ISO_CAP, DEFAULT_SEARCH_BUDGET};
    use crate::enriched::{discrete_cat, efun_id, etrans_id, hat_cat, validate_modcell};

    fn budget() -> Budget {
        Budget::new(DEFAULT_SEARCH_BUDGET)
    }

    /// The walking arrow as a one-object span-enriched category: extent
    /// {0, 1}, morphisms [id0, id1, a: 0→1], legs left = target,
    /// right = source.
    fn walking_arrow() -> Arc<ECategory> {
        let b = Base::span_finset(ArityClass::Singleton);
        let ext = BaseObj::Set(2);
        let hom = Hom1::span(2, 2, vec![0, 1, 1], vec![0, 1, 0]).unwrap();
        // pairs of hom∘hom in composition order: (p after q)
        // f-major over p ∈ hom[y][z]: (id0,id0)→id0, (id1,id1)→id1,
        // (id1,a)→a, (a,id0)→a
        let m = b.hom2_span(&b.compose1(&hom, &hom).unwrap(), &hom, vec![0, 1, 2, 2]).unwrap();
        let u = b.hom2_span(&b.id1(&ext).unwrap(), &hom, vec![0, 1]).unwrap();
        Arc::new(
            ECategory::new(
                "walking-arrow",
                b,
                vec!["*".into()],
                vec![ext],
                vec![vec![hom]],
                vec![vec![vec![m]]],
                vec![u],
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_module_composes_to_itself() {
        let c = walking_arrow();
        let id = Arc::new(mod_id(&c).unwrap());
        let sq = mod_compose(&id, &id).unwrap();
        assert!(crate::enriched::validate_emodule(&sq.composite).unwrap().ok());
        // the middle quotient collapses 4 pairs to the 3 morphisms
        assert_eq!(sq.composite.comp[0][0].carrier_size(), 3);
        let b = &c.base;
        assert!(b.iso1(&sq.composite.comp[0][0], &c.hom[0][0]).unwrap().is_some());
    }

    #[test]
    fn unitors_and_associator_are_inverse_pairs() {
        let c = walking_arrow();
        let id = Arc::new(mod_id(&c).unwrap());
        let (lf, lb) = mod_lunitor(&id).unwrap();
        assert_eq!(modcell_vcomp(&lf, &lb).unwrap(), modcell_id(&id).unwrap());
        let round = modcell_vcomp(&lb, &lf).unwrap();
        assert_eq!(round, modcell_id(&Arc::new(lf.src.as_ref().clone())).unwrap());

        let (rf, rb) = mod_runitor(&id).unwrap();
        assert_eq!(modcell_vcomp(&rf, &rb).unwrap(), modcell_id(&id).unwrap());

        let (af, ab) = mod_associator(&id, &id, &id).unwrap();
        let left_round = modcell_vcomp(&ab, &af).unwrap();
        assert_eq!(left_round.src, left_round.dst);
        assert_eq!(left_round, modcell_id(&left_round.src.clone()).unwrap());
        let right_round = modcell_vcomp(&af, &ab).unwrap();
        assert_eq!(right_round, modcell_id(&right_round.src.clone()).unwrap());
    }

    #[test]
    fn representable_of_identity_is_the_identity_module() {
        let c = walking_arrow();
        let d = efun_id(&c).unwrap();
        let rep = Arc::new(representable(&d).unwrap());
        assert!(crate::enriched::validate_emodule(&rep).unwrap().ok());
        let id = Arc::new(mod_id(&c).unwrap());
        let mut bg = budget();
        let iso = iso_modcell(&rep, &id, DEFAULT_ISO_CAP, &mut bg).unwrap();
        assert!(iso.is_some());
        let (fwd, bwd) = iso.unwrap();
        assert!(validate_modcell(&fwd).unwrap().ok());
        assert!(validate_modcell(&bwd).unwrap().ok());
    }

    #[test]
    fn representable_adjunction_satisfies_the_triangles() {
        let c = walking_arrow();
        let d = efun_id(&c).unwrap();
        let l = Arc::new(representable(&d).unwrap());
        let r = Arc::new(corepresentable(&d).unwrap());
        assert!(crate::enriched::validate_emodule(&r).unwrap().ok());
        let (unit, counit) = representable_adjunction(&d).unwrap();
        assert!(validate_modcell(&unit).unwrap().ok());
        assert!(validate_modcell(&counit).unwrap().ok());
        assert!(adjunction_check(&l, &r, &unit, &counit).unwrap());
    }

    #[test]
    fn transformation_round_trips_through_module_cells() {
        let c = walking_arrow();
        let d = Arc::new(efun_id(&c).unwrap());
        let t = etrans_id(&d).unwrap();
        let cell = trans_to_modcell(&t).unwrap();
        assert!(validate_modcell(&cell).unwrap().ok());
        let back = modcell_to_trans(&cell, &d, &d).unwrap();
        assert_eq!(back.comp, t.comp);
    }

    #[test]
    fn composition_witness_is_invertible() {
        let c = walking_arrow();
        let d = efun_id(&c).unwrap();
        let (fwd, bwd) = j_compose_witness(&d, &d).unwrap();
        assert!(validate_modcell(&fwd).unwrap().ok());
        let round = modcell_vcomp(&bwd, &fwd).unwrap();
        assert_eq!(round, modcell_id(&round.src.clone()).unwrap());
        let round = modcell_vcomp(&fwd, &bwd).unwrap();
        assert_eq!(round, modcell_id(&round.src.clone()).unwrap());
    }

    #[test]
    fn tightening_finds_the_identity_presentation() {
        let c = walking_arrow();
        let id = Arc::new(mod_id(&c).unwrap());
        let mut bg = budget();
        match find_tightening(&id, DEFAULT_ISO_CAP, &mut bg).unwrap() {
            Tightening::Found { functor, fwd, .. } => {
                assert_eq!(functor.ob, vec![0]);
                assert!(validate_modcell(&fwd).unwrap().ok());
            }
            other => panic!("expected a tightening, got {other:?}"),
        }
    }

    #[test]
    fn identity_module_is_an_equivalence() {
        let b = Base::boolean_quantale(ArityClass::Finite);
        let c = Arc::new(
            discrete_cat(&b, "pair", vec!["p".into(), "q".into()], vec![
                BaseObj::Set(1),
                BaseObj::Set(1),
            ])
            .unwrap(),
        );
        let id = Arc::new(mod_id(&c).unwrap());
        let mut bg = budget();
        match module_equivalence(&id, DEFAULT_ISO_CAP, &mut bg).unwrap() {
            SearchOutcome::Found(w) => {
                assert!(crate::enriched::validate_emodule(&w.pseudoinverse).unwrap().ok());
            }
            other => panic!("identity should be an equivalence, got {other:?}"),
        }
    }

    #[test]
    fn singleton_components_module_is_provably_not_an_equivalence() {
        // terminal one-object category vs a discrete pair, all extents a
        // point; the module with both components a singleton cannot be an
        // equivalence because B(p,q) is empty while any composite through
        // the point is not.
        let b = Base::span_finset(ArityClass::Finite);
        let one = Arc::new(
            discrete_cat(&b, "one", vec!["*".into()], vec![BaseObj::Set(1)]).unwrap(),
        );
        let two = Arc::new(
            discrete_cat(&b, "pair", vec!["p".into(), "q".into()], vec![
                BaseObj::Set(1),
                BaseObj::Set(1),
            ])
            .unwrap(),
        );
        let pt = Hom1::span(1, 1, vec![0], vec![0]).unwrap();
        let bb = &b;
        let mk_act = |comp: &Hom1, right: bool| -> Hom2 {
            if right {
                bb.runitor(comp).unwrap().fwd
            } else {
                bb.lunitor(comp).unwrap().fwd
            }
        };
        let comp = vec![vec![pt.clone()], vec![pt.clone()]];
        let ract = vec![
            vec![vec![mk_act(&comp[0][0], true)]],
            vec![vec![mk_act(&comp[1][0], true)]],
        ];
        // lact[u][v][x]: off-diagonal homs are initial
        let mut lact = Vec::new();
        for u in 0..2 {
            let mut lv = Vec::new();
            for v in 0..2 {
                if u == v {
                    lv.push(vec![mk_act(&comp[u][0], false)]);
                } else {
                    let s = bb.compose1(&two.hom[u][v], &comp[v][0]).unwrap();
                    lv.push(vec![bb.hom2_from_initial(&s, &comp[u][0]).unwrap()]);
                }
            }
            lact.push(lv);
        }
        let t = Arc::new(
            EModule::new("both-points", one.clone(), two.clone(), comp, ract, lact).unwrap(),
        );
        assert!(crate::enriched::validate_emodule(&t).unwrap().ok());
        let mut bg = budget();
        match module_equivalence(&t, 2, &mut bg).unwrap() {
            SearchOutcome::Exhausted { .. } => {}
            other => panic!("expected a definitive no, got {other:?}"),
        }
    }

    #[test]
    fn derived_base_ops_route_through_module_machinery() {
        let c = walking_arrow();
        let inner = c.base.clone();
        let derived = Base::mod_derived(inner, ArityClass::Finite);
        let obj = BaseObj::Cat(c.clone());
        let idc = derived.id1(&obj).unwrap();
        let sq = derived.compose1(&idc, &idc).unwrap();
        assert!(derived.iso1(&sq, &idc).unwrap().is_some());
        let lu = derived.lunitor(&idc).unwrap();
        assert!(derived.hom2_eq(
            &derived.vcomp(&lu.fwd, &lu.bwd).unwrap(),
            &derived.id2(&idc).unwrap()
        ));
        let a = derived.associator(&idc, &idc, &idc).unwrap();
        let round = derived.vcomp(&a.bwd, &a.fwd).unwrap();
        assert!(derived.hom2_eq(&round, &derived.id2(&a.fwd.src).unwrap()));
    }

    #[test]
    fn hat_module_composition_over_a_quantale() {
        let q = Quantale::min_plus(6);
        let b = Base::finite_quantale(q, ArityClass::Singleton);
        let c = Arc::new(hat_cat(&b, &BaseObj::One).unwrap());
        let id = Arc::new(mod_id(&c).unwrap());
        let sq = mod_compose(&id, &id).unwrap();
        // over a quantale the coequalizer is the join itself
        assert_eq!(sq.composite.comp[0][0], c.hom[0][0]);
        let (lf, lb) = mod_lunitor(&id).unwrap();
        assert_eq!(modcell_vcomp(&lf, &lb).unwrap(), modcell_id(&id).unwrap());
    }
}
