//! Enriched categories, functors, transformations, icons, modules and
//! module morphisms over a [`Base`].
//!
//! Conventions (fixed throughout the crate):
//!
//! * `hom[x][y]` is a base 1-cell `extent(y) → extent(x)` whose carrier reads
//!   as the arrows `x → y`. At the point level (spans) the left leg selects
//!   the target point, the right leg the source point.
//! * `comp[x][y][z] : hom(x,y)∘hom(y,z) ⇒ hom(x,z)` (composition "p after q"
//!   on carrier pairs), `unit[x] : 1_{εx} ⇒ hom(x,x)`.
//! * A module `T : A ⇸ B` stores `comp[u][x] : εx → εu` for `u ∈ B`, `x ∈ A`
//!   (carriers read as heteromorphisms `u → x`), a right A-action
//!   `ract[u][x][y] : T(u,x)∘A(x,y) ⇒ T(u,y)` and a left B-action
//!   `lact[u][v][x] : B(u,v)∘T(v,x) ⇒ T(u,x)`.
//!
//! Constructors (`new`) reject malformed *structure* with hard errors;
//! equational *laws* are checked by the `validate_*` functions, which return
//! a [`ValidationReport`] listing failures in a fixed deterministic order.

use std::fmt;
use std::sync::Arc;

use crate::base::{ArityClass, Base, BaseObj, Hom1, Hom2};
use crate::error::{CkError, Result};

/// One law failure, with a stable location string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub law: String,
    pub at: String,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.law, self.at, self.detail)
    }
}

/// Outcome of a law validation pass. Failures appear in a deterministic
/// order (laws in definition order, indices lexicographic), so the first
/// entry is the canonical counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, law: &str, at: String, detail: impl Into<String>) {
        self.failures.push(Failure { law: law.into(), at, detail: detail.into() });
    }

    /// Turn a failed report into a hard error (used by pipelines that
    /// require validated inputs).
    pub fn into_result(self) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(CkError::structural(format!("{}: {}", self.subject, f))),
        }
    }
}

/// A κ-small category enriched in a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ECategory {
    pub name: String,
    pub base: Base,
    pub obj_names: Vec<String>,
    pub extents: Vec<BaseObj>,
    pub hom: Vec<Vec<Hom1>>,
    pub comp: Vec<Vec<Vec<Hom2>>>,
    pub unit: Vec<Hom2>,
}

impl ECategory {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        base: Base,
        obj_names: Vec<String>,
        extents: Vec<BaseObj>,
        hom: Vec<Vec<Hom1>>,
        comp: Vec<Vec<Vec<Hom2>>>,
        unit: Vec<Hom2>,
    ) -> Result<ECategory> {
        let c = ECategory { name: name.into(), base, obj_names, extents, hom, comp, unit };
        c.check_structure()?;
        Ok(c)
    }

    pub fn n_objects(&self) -> usize {
        self.extents.len()
    }

    pub fn obj_index(&self, name: &str) -> Option<usize> {
        self.obj_names.iter().position(|n| n == name)
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.n_objects();
        if self.obj_names.len() != n {
            return Err(CkError::structural("one name per object required"));
        }
        if self.base.arity() == ArityClass::Singleton && n != 1 {
            return Err(CkError::Arity(format!(
                "category {} has {n} objects but the base has singleton arity",
                self.name
            )));
        }
        if self.hom.len() != n || self.comp.len() != n || self.unit.len() != n {
            return Err(CkError::structural("hom/comp/unit tables must be indexed by objects"));
        }
        for e in &self.extents {
            self.base.valid_obj(e)?;
        }
        for x in 0..n {
            if self.hom[x].len() != n {
                return Err(CkError::structural("hom table must be square"));
            }
            for y in 0..n {
                let h = &self.hom[x][y];
                self.base.check_cell(h)?;
                if h.src != self.extents[y] || h.dst != self.extents[x] {
                    return Err(CkError::structural(format!(
                        "hom({},{}) must be a 1-cell extent({}) → extent({})",
                        self.obj_names[x], self.obj_names[y], self.obj_names[y], self.obj_names[x]
                    )));
                }
            }
        }
        for x in 0..n {
            if self.comp[x].len() != n || self.comp[x].iter().any(|r| r.len() != n) {
                return Err(CkError::structural("comp table must be n×n×n"));
            }
            for y in 0..n {
                for z in 0..n {
                    let m = &self.comp[x][y][z];
                    let expect_src = self.base.compose1(&self.hom[x][y], &self.hom[y][z])?;
                    if m.src != expect_src {
                        return Err(CkError::structural(format!(
                            "comp({x},{y},{z}) source is not hom({x},{y})∘hom({y},{z})"
                        )));
                    }
                    if m.dst != self.hom[x][z] {
                        return Err(CkError::structural(format!(
                            "comp({x},{y},{z}) target is not hom({x},{z})"
                        )));
                    }
                }
            }
            let j = &self.unit[x];
            if j.src != self.base.id1(&self.extents[x])? {
                return Err(CkError::structural(format!("unit({x}) source is not the identity 1-cell")));
            }
            if j.dst != self.hom[x][x] {
                return Err(CkError::structural(format!("unit({x}) target is not hom({x},{x})")));
            }
        }
        Ok(())
    }

    /// Whether every off-diagonal hom is initial and every diagonal hom is
    /// the identity 1-cell.
    pub fn is_discrete(&self) -> bool {
        let n = self.n_objects();
        (0..n).all(|x| {
            (0..n).all(|y| {
                if x == y {
                    self.base.id1(&self.extents[x]).map(|i| i == self.hom[x][x]).unwrap_or(false)
                } else {
                    self.base.is_initial(&self.hom[x][y])
                }
            })
        })
    }
}

/// Check the associativity and unit laws of an enriched category.
pub fn validate_ecategory(c: &ECategory) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new(format!("ecategory {}", c.name));
    let b = &c.base;
    let n = c.n_objects();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let route_l =
                        b.vcomp(&c.comp[x][z][w], &b.whisker_right(&c.comp[x][y][z], &c.hom[z][w])?)?;
                    let alpha = b.associator(&c.hom[x][y], &c.hom[y][z], &c.hom[z][w])?;
                    let route_r = b.vcomp(
                        &c.comp[x][y][w],
                        &b.vcomp(&b.whisker_left(&c.hom[x][y], &c.comp[y][z][w])?, &alpha.fwd)?,
                    )?;
                    if !b.hom2_eq(&route_l, &route_r) {
                        rep.push(
                            "assoc",
                            format!(
                                "({},{},{},{})",
                                c.obj_names[x], c.obj_names[y], c.obj_names[z], c.obj_names[w]
                            ),
                            "the two composition routes differ",
                        );
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = b.vcomp(&c.comp[x][x][y], &b.whisker_right(&c.unit[x], &c.hom[x][y])?)?;
            if !b.hom2_eq(&lhs, &b.lunitor(&c.hom[x][y])?.fwd) {
                rep.push(
                    "unit-left",
                    format!("({},{})", c.obj_names[x], c.obj_names[y]),
                    "composing with the source identity is not the left unitor",
                );
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = b.vcomp(&c.comp[x][y][y], &b.whisker_left(&c.hom[x][y], &c.unit[y])?)?;
            if !b.hom2_eq(&lhs, &b.runitor(&c.hom[x][y])?.fwd) {
                rep.push(
                    "unit-right",
                    format!("({},{})", c.obj_names[x], c.obj_names[y]),
                    "composing with the target identity is not the right unitor",
                );
            }
        }
    }
    Ok(rep)
}

/// An enriched functor `D : A → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EFunctor {
    pub name: String,
    pub src: Arc<ECategory>,
    pub dst: Arc<ECategory>,
    pub ob: Vec<usize>,
    /// `cells[x] : εx → ε'_{Dx}`, required tight by `validate_efunctor`
    pub cells: Vec<Hom1>,
    /// `sq[x][y] : D_x∘A(x,y) ⇒ B(Dx,Dy)∘D_y`
    pub sq: Vec<Vec<Hom2>>,
}

impl EFunctor {
    pub fn new(
        name: impl Into<String>,
        src: Arc<ECategory>,
        dst: Arc<ECategory>,
        ob: Vec<usize>,
        cells: Vec<Hom1>,
        sq: Vec<Vec<Hom2>>,
    ) -> Result<EFunctor> {
        let d = EFunctor { name: name.into(), src, dst, ob, cells, sq };
        d.check_structure()?;
        Ok(d)
    }

    fn check_structure(&self) -> Result<()> {
        if self.src.base != self.dst.base {
            return Err(CkError::structural("functor between categories over different bases"));
        }
        let b = &self.src.base;
        let n = self.src.n_objects();
        if self.ob.len() != n || self.cells.len() != n || self.sq.len() != n {
            return Err(CkError::structural("functor tables must be indexed by source objects"));
        }
        if self.ob.iter().any(|&o| o >= self.dst.n_objects()) {
            return Err(CkError::structural("object map out of range"));
        }
        for x in 0..n {
            let c = &self.cells[x];
            b.check_cell(c)?;
            if c.src != self.src.extents[x] || c.dst != self.dst.extents[self.ob[x]] {
                return Err(CkError::structural(format!(
                    "cell at {} must be a 1-cell εx → ε'Dx",
                    self.src.obj_names[x]
                )));
            }
            if self.sq[x].len() != n {
                return Err(CkError::structural("sq table must be square"));
            }
            for y in 0..n {
                let s = &self.sq[x][y];
                if s.src != b.compose1(&self.cells[x], &self.src.hom[x][y])? {
                    return Err(CkError::structural(format!("sq({x},{y}) has wrong source")));
                }
                if s.dst
                    != b.compose1(&self.dst.hom[self.ob[x]][self.ob[y]], &self.cells[y])?
                {
                    return Err(CkError::structural(format!("sq({x},{y}) has wrong target")));
                }
            }
        }
        Ok(())
    }
}

/// Check tightness of the cells and the two functor laws.
pub fn validate_efunctor(d: &EFunctor) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new(format!("efunctor {}", d.name));
    let b = &d.src.base;
    let (a_cat, b_cat) = (&d.src, &d.dst);
    let n = a_cat.n_objects();
    for x in 0..n {
        if !b.is_tight(&d.cells[x])? {
            rep.push("tight", a_cat.obj_names[x].clone(), "functor cell is not tight");
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (dx, dy, dz) = (d.ob[x], d.ob[y], d.ob[z]);
                // route L: 1∘m then the (x,z) square
                let route_l = b.vcomp(
                    &d.sq[x][z],
                    &b.whisker_left(&d.cells[x], &a_cat.comp[x][y][z])?,
                )?;
                // route R: reassociate, square, reassociate, square, m_B
                let a1 = b.associator(&d.cells[x], &a_cat.hom[x][y], &a_cat.hom[y][z])?;
                let a2 = b.associator(&b_cat.hom[dx][dy], &d.cells[y], &a_cat.hom[y][z])?;
                let a3 = b.associator(&b_cat.hom[dx][dy], &b_cat.hom[dy][dz], &d.cells[z])?;
                let route_r = b.vcomp(
                    &b.whisker_right(&b_cat.comp[dx][dy][dz], &d.cells[z])?,
                    &b.vcomp(
                        &a3.bwd,
                        &b.vcomp(
                            &b.whisker_left(&b_cat.hom[dx][dy], &d.sq[y][z])?,
                            &b.vcomp(
                                &a2.fwd,
                                &b.vcomp(&b.whisker_right(&d.sq[x][y], &a_cat.hom[y][z])?, &a1.bwd)?,
                            )?,
                        )?,
                    )?,
                )?;
                if !b.hom2_eq(&route_l, &route_r) {
                    rep.push(
                        "compose",
                        format!(
                            "({},{},{})",
                            a_cat.obj_names[x], a_cat.obj_names[y], a_cat.obj_names[z]
                        ),
                        "the functor square does not respect composition",
                    );
                }
            }
        }
    }
    for x in 0..n {
        let dx = d.ob[x];
        let left = b.vcomp(
            &d.sq[x][x],
            &b.vcomp(&b.whisker_left(&d.cells[x], &a_cat.unit[x])?, &b.runitor(&d.cells[x])?.bwd)?,
        )?;
        let right = b.vcomp(
            &b.whisker_right(&b_cat.unit[dx], &d.cells[x])?,
            &b.lunitor(&d.cells[x])?.bwd,
        )?;
        if !b.hom2_eq(&left, &right) {
            rep.push("unit", a_cat.obj_names[x].clone(), "the functor square does not respect units");
        }
    }
    Ok(rep)
}

/// An enriched transformation `ϑ : D ⇒ E` with components
/// `ϑ[x] : D_x ⇒ B(Dx,Ex)∘E_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ETransformation {
    pub src: Arc<EFunctor>,
    pub dst: Arc<EFunctor>,
    pub comp: Vec<Hom2>,
}

impl ETransformation {
    pub fn new(src: Arc<EFunctor>, dst: Arc<EFunctor>, comp: Vec<Hom2>) -> Result<ETransformation> {
        let t = ETransformation { src, dst, comp };
        t.check_structure()?;
        Ok(t)
    }

    fn check_structure(&self) -> Result<()> {
        let (d, e) = (&self.src, &self.dst);
        if d.src != e.src || d.dst != e.dst {
            return Err(CkError::structural("transformation between non-parallel functors"));
        }
        let b = &d.src.base;
        let n = d.src.n_objects();
        if self.comp.len() != n {
            return Err(CkError::structural("one component per object required"));
        }
        for x in 0..n {
            let c = &self.comp[x];
            if c.src != d.cells[x] {
                return Err(CkError::structural(format!("component {x} has wrong source")));
            }
            if c.dst != b.compose1(&d.dst.hom[d.ob[x]][e.ob[x]], &e.cells[x])? {
                return Err(CkError::structural(format!("component {x} has wrong target")));
            }
        }
        Ok(())
    }
}

/// Check the single naturality pasting of an enriched transformation.
pub fn validate_etrans(t: &ETransformation) -> Result<ValidationReport> {
    let (d, e) = (&t.src, &t.dst);
    let mut rep = ValidationReport::new(format!("etransformation {} => {}", d.name, e.name));
    let b = &d.src.base;
    let (a_cat, b_cat) = (&d.src, &d.dst);
    let n = a_cat.n_objects();
    for x in 0..n {
        for y in 0..n {
            let (dx, dy, ex, ey) = (d.ob[x], d.ob[y], e.ob[x], e.ob[y]);
            let lhs = {
                let a = b.associator(&b_cat.hom[dx][dy], &b_cat.hom[dy][ey], &e.cells[y])?;
                b.vcomp(
                    &b.whisker_right(&b_cat.comp[dx][dy][ey], &e.cells[y])?,
                    &b.vcomp(
                        &a.bwd,
                        &b.vcomp(&b.whisker_left(&b_cat.hom[dx][dy], &t.comp[y])?, &d.sq[x][y])?,
                    )?,
                )?
            };
            let rhs = {
                let a1 = b.associator(&b_cat.hom[dx][ex], &e.cells[x], &a_cat.hom[x][y])?;
                let a2 = b.associator(&b_cat.hom[dx][ex], &b_cat.hom[ex][ey], &e.cells[y])?;
                b.vcomp(
                    &b.whisker_right(&b_cat.comp[dx][ex][ey], &e.cells[y])?,
                    &b.vcomp(
                        &a2.bwd,
                        &b.vcomp(
                            &b.whisker_left(&b_cat.hom[dx][ex], &e.sq[x][y])?,
                            &b.vcomp(
                                &a1.fwd,
                                &b.whisker_right(&t.comp[x], &a_cat.hom[x][y])?,
                            )?,
                        )?,
                    )?,
                )?
            };
            if !b.hom2_eq(&lhs, &rhs) {
                rep.push(
                    "naturality",
                    format!("({},{})", a_cat.obj_names[x], a_cat.obj_names[y]),
                    "the two naturality pastings differ",
                );
            }
        }
    }
    Ok(rep)
}

/// An icon between functors with equal object maps: components
/// `ι[x] : D_x ⇒ E_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EIcon {
    pub src: Arc<EFunctor>,
    pub dst: Arc<EFunctor>,
    pub comp: Vec<Hom2>,
}

impl EIcon {
    pub fn new(src: Arc<EFunctor>, dst: Arc<EFunctor>, comp: Vec<Hom2>) -> Result<EIcon> {
        let i = EIcon { src, dst, comp };
        i.check_structure()?;
        Ok(i)
    }

    fn check_structure(&self) -> Result<()> {
        let (d, e) = (&self.src, &self.dst);
        if d.src != e.src || d.dst != e.dst {
            return Err(CkError::structural("icon between non-parallel functors"));
        }
        if d.ob != e.ob {
            return Err(CkError::structural("icon requires equal object maps"));
        }
        let n = d.src.n_objects();
        if self.comp.len() != n {
            return Err(CkError::structural("one component per object required"));
        }
        for x in 0..n {
            if self.comp[x].src != d.cells[x] || self.comp[x].dst != e.cells[x] {
                return Err(CkError::structural(format!("icon component {x} has wrong boundary")));
            }
        }
        Ok(())
    }
}

/// Check the interchange law of an icon (the object-map agreement is
/// structural and enforced at construction).
pub fn validate_eicon(i: &EIcon) -> Result<ValidationReport> {
    let (d, e) = (&i.src, &i.dst);
    let mut rep = ValidationReport::new(format!("eicon {} => {}", d.name, e.name));
    let b = &d.src.base;
    let a_cat = &d.src;
    let b_cat = &d.dst;
    let n = a_cat.n_objects();
    for x in 0..n {
        for y in 0..n {
            let lhs = b.vcomp(&e.sq[x][y], &b.whisker_right(&i.comp[x], &a_cat.hom[x][y])?)?;
            let rhs = b.vcomp(
                &b.whisker_left(&b_cat.hom[d.ob[x]][d.ob[y]], &i.comp[y])?,
                &d.sq[x][y],
            )?;
            if !b.hom2_eq(&lhs, &rhs) {
                rep.push(
                    "interchange",
                    format!("({},{})", a_cat.obj_names[x], a_cat.obj_names[y]),
                    "icon interchange pasting fails",
                );
            }
        }
    }
    Ok(rep)
}

/// An enriched module `T : A ⇸ B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EModule {
    pub name: String,
    pub src: Arc<ECategory>,
    pub dst: Arc<ECategory>,
    /// `comp[u][x] : εx → εu` for `u ∈ dst`, `x ∈ src`
    pub comp: Vec<Vec<Hom1>>,
    /// `ract[u][x][y] : T(u,x)∘A(x,y) ⇒ T(u,y)`
    pub ract: Vec<Vec<Vec<Hom2>>>,
    /// `lact[u][v][x] : B(u,v)∘T(v,x) ⇒ T(u,x)`
    pub lact: Vec<Vec<Vec<Hom2>>>,
}

impl EModule {
    pub fn new(
        name: impl Into<String>,
        src: Arc<ECategory>,
        dst: Arc<ECategory>,
        comp: Vec<Vec<Hom1>>,
        ract: Vec<Vec<Vec<Hom2>>>,
        lact: Vec<Vec<Vec<Hom2>>>,
    ) -> Result<EModule> {
        let m = EModule { name: name.into(), src, dst, comp, ract, lact };
        m.check_structure()?;
        Ok(m)
    }

    pub fn label(&self) -> String {
        format!("{} : {} -|-> {}", self.name, self.src.name, self.dst.name)
    }

    fn check_structure(&self) -> Result<()> {
        if self.src.base != self.dst.base {
            return Err(CkError::structural("module between categories over different bases"));
        }
        let b = &self.src.base;
        let (na, nb) = (self.src.n_objects(), self.dst.n_objects());
        if self.comp.len() != nb || self.ract.len() != nb || self.lact.len() != nb {
            return Err(CkError::structural("module tables must be indexed by dst objects"));
        }
        for u in 0..nb {
            if self.comp[u].len() != na {
                return Err(CkError::structural("comp table must be |dst|×|src|"));
            }
            for x in 0..na {
                let h = &self.comp[u][x];
                b.check_cell(h)?;
                if h.src != self.src.extents[x] || h.dst != self.dst.extents[u] {
                    return Err(CkError::structural(format!(
                        "component ({u},{x}) must be a 1-cell εx → εu"
                    )));
                }
            }
            if self.ract[u].len() != na || self.ract[u].iter().any(|r| r.len() != na) {
                return Err(CkError::structural("ract table must be |dst|×|src|×|src|"));
            }
            if self.lact[u].len() != nb || self.lact[u].iter().any(|r| r.len() != na) {
                return Err(CkError::structural("lact table must be |dst|×|dst|×|src|"));
            }
            for x in 0..na {
                for y in 0..na {
                    let r = &self.ract[u][x][y];
                    if r.src != b.compose1(&self.comp[u][x], &self.src.hom[x][y])? {
                        return Err(CkError::structural(format!("ract({u},{x},{y}) has wrong source")));
                    }
                    if r.dst != self.comp[u][y] {
                        return Err(CkError::structural(format!("ract({u},{x},{y}) has wrong target")));
                    }
                }
            }
            for v in 0..nb {
                for x in 0..na {
                    let l = &self.lact[u][v][x];
                    if l.src != b.compose1(&self.dst.hom[u][v], &self.comp[v][x])? {
                        return Err(CkError::structural(format!("lact({u},{v},{x}) has wrong source")));
                    }
                    if l.dst != self.comp[u][x] {
                        return Err(CkError::structural(format!("lact({u},{v},{x}) has wrong target")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Check the five module laws: right associativity and unit, left
/// associativity and unit, and the mixed middle-associativity law.
pub fn validate_emodule(t: &EModule) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new(format!("emodule {}", t.label()));
    let b = &t.src.base;
    let a_cat = &t.src;
    let b_cat = &t.dst;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let at =
        |idx: &[usize]| idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    // R1: T(u,x)∘(A(x,y)∘A(y,z))
    for u in 0..nb {
        for x in 0..na {
            for y in 0..na {
                for z in 0..na {
                    let lhs = b.vcomp(
                        &t.ract[u][x][z],
                        &b.whisker_left(&t.comp[u][x], &a_cat.comp[x][y][z])?,
                    )?;
                    let a = b.associator(&t.comp[u][x], &a_cat.hom[x][y], &a_cat.hom[y][z])?;
                    let rhs = b.vcomp(
                        &t.ract[u][y][z],
                        &b.vcomp(&b.whisker_right(&t.ract[u][x][y], &a_cat.hom[y][z])?, &a.bwd)?,
                    )?;
                    if !b.hom2_eq(&lhs, &rhs) {
                        rep.push("R1", at(&[u, x, y, z]), "right action not associative");
                    }
                }
            }
        }
    }
    // R2: unit action on the right
    for u in 0..nb {
        for x in 0..na {
            let lhs = b.vcomp(
                &t.ract[u][x][x],
                &b.whisker_left(&t.comp[u][x], &a_cat.unit[x])?,
            )?;
            if !b.hom2_eq(&lhs, &b.runitor(&t.comp[u][x])?.fwd) {
                rep.push("R2", at(&[u, x]), "right unit action is not the right unitor");
            }
        }
    }
    // L1: (B(u,v)∘B(v,w))∘T(w,x), stated from the right-nested composite
    for u in 0..nb {
        for v in 0..nb {
            for w in 0..nb {
                for x in 0..na {
                    let lhs = b.vcomp(
                        &t.lact[u][v][x],
                        &b.whisker_left(&b_cat.hom[u][v], &t.lact[v][w][x])?,
                    )?;
                    let a = b.associator(&b_cat.hom[u][v], &b_cat.hom[v][w], &t.comp[w][x])?;
                    let rhs = b.vcomp(
                        &t.lact[u][w][x],
                        &b.vcomp(&b.whisker_right(&b_cat.comp[u][v][w], &t.comp[w][x])?, &a.bwd)?,
                    )?;
                    if !b.hom2_eq(&lhs, &rhs) {
                        rep.push("L1", at(&[u, v, w, x]), "left action not associative");
                    }
                }
            }
        }
    }
    // L2: unit action on the left
    for u in 0..nb {
        for x in 0..na {
            let lhs = b.vcomp(
                &t.lact[u][u][x],
                &b.whisker_right(&b_cat.unit[u], &t.comp[u][x])?,
            )?;
            if !b.hom2_eq(&lhs, &b.lunitor(&t.comp[u][x])?.fwd) {
                rep.push("L2", at(&[u, x]), "left unit action is not the left unitor");
            }
        }
    }
    // M: B(u,v)∘(T(v,x)∘A(x,y))
    for u in 0..nb {
        for v in 0..nb {
            for x in 0..na {
                for y in 0..na {
                    let lhs = b.vcomp(
                        &t.lact[u][v][y],
                        &b.whisker_left(&b_cat.hom[u][v], &t.ract[v][x][y])?,
                    )?;
                    let a = b.associator(&b_cat.hom[u][v], &t.comp[v][x], &a_cat.hom[x][y])?;
                    let rhs = b.vcomp(
                        &t.ract[u][x][y],
                        &b.vcomp(&b.whisker_right(&t.lact[u][v][x], &a_cat.hom[x][y])?, &a.bwd)?,
                    )?;
                    if !b.hom2_eq(&lhs, &rhs) {
                        rep.push("M", at(&[u, v, x, y]), "actions fail middle associativity");
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// A module morphism `φ : T ⇒ T'` between parallel modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModCell {
    pub src: Arc<EModule>,
    pub dst: Arc<EModule>,
    pub comp: Vec<Vec<Hom2>>,
}

impl ModCell {
    pub fn new(src: Arc<EModule>, dst: Arc<EModule>, comp: Vec<Vec<Hom2>>) -> Result<ModCell> {
        let c = ModCell { src, dst, comp };
        c.check_structure()?;
        Ok(c)
    }

    fn check_structure(&self) -> Result<()> {
        if self.src.src != self.dst.src || self.src.dst != self.dst.dst {
            return Err(CkError::structural("module morphism between non-parallel modules"));
        }
        let (na, nb) = (self.src.src.n_objects(), self.src.dst.n_objects());
        if self.comp.len() != nb || self.comp.iter().any(|r| r.len() != na) {
            return Err(CkError::structural("module morphism table must be |dst|×|src|"));
        }
        for u in 0..nb {
            for x in 0..na {
                let c = &self.comp[u][x];
                if c.src != self.src.comp[u][x] || c.dst != self.dst.comp[u][x] {
                    return Err(CkError::structural(format!(
                        "module morphism component ({u},{x}) has wrong boundary"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Check the two equivariance laws of a module morphism.
pub fn validate_modcell(c: &ModCell) -> Result<ValidationReport> {
    let mut rep =
        ValidationReport::new(format!("module morphism {} => {}", c.src.name, c.dst.name));
    let b = &c.src.src.base;
    let a_cat = &c.src.src;
    let b_cat = &c.src.dst;
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    for u in 0..nb {
        for x in 0..na {
            for y in 0..na {
                let lhs = b.vcomp(&c.comp[u][y], &c.src.ract[u][x][y])?;
                let rhs = b.vcomp(
                    &c.dst.ract[u][x][y],
                    &b.whisker_right(&c.comp[u][x], &a_cat.hom[x][y])?,
                )?;
                if !b.hom2_eq(&lhs, &rhs) {
                    rep.push(
                        "equivariance-right",
                        format!("{u},{x},{y}"),
                        "module morphism does not commute with the right action",
                    );
                }
            }
        }
    }
    for u in 0..nb {
        for v in 0..nb {
            for x in 0..na {
                let lhs = b.vcomp(&c.comp[u][x], &c.src.lact[u][v][x])?;
                let rhs = b.vcomp(
                    &c.dst.lact[u][v][x],
                    &b.whisker_left(&b_cat.hom[u][v], &c.comp[v][x])?,
                )?;
                if !b.hom2_eq(&lhs, &rhs) {
                    rep.push(
                        "equivariance-left",
                        format!("{u},{v},{x}"),
                        "module morphism does not commute with the left action",
                    );
                }
            }
        }
    }
    Ok(rep)
}

// ----------------------------------------------------------------------
// canonical constructors
// ----------------------------------------------------------------------

/// The discrete enriched category on a family of extents: identity homs on
/// the diagonal, initial 1-cells elsewhere.
pub fn discrete_cat(
    base: &Base,
    name: impl Into<String>,
    obj_names: Vec<String>,
    extents: Vec<BaseObj>,
) -> Result<ECategory> {
    let n = extents.len();
    let mut hom = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(if x == y {
                base.id1(&extents[x])?
            } else {
                base.initial_hom1(&extents[y], &extents[x])?
            });
        }
        hom.push(row);
    }
    let mut comp = Vec::with_capacity(n);
    for x in 0..n {
        let mut plane = Vec::with_capacity(n);
        for y in 0..n {
            let mut row = Vec::with_capacity(n);
            for z in 0..n {
                let cell = if x == y {
                    base.lunitor(&hom[x][z])?.fwd
                } else if y == z {
                    base.runitor(&hom[x][y])?.fwd
                } else {
                    let c = base.compose1(&hom[x][y], &hom[y][z])?;
                    base.hom2_from_initial(&c, &hom[x][z])?
                };
                row.push(cell);
            }
            plane.push(row);
        }
        comp.push(plane);
    }
    let unit = (0..n).map(|x| base.id2(&hom[x][x])).collect::<Result<Vec<_>>>()?;
    ECategory::new(name, base.clone(), obj_names, extents, hom, comp, unit)
}

/// The one-object enriched category `v̂` on a base object: hom is the
/// identity 1-cell, composition the unitor, unit the identity 2-cell.
pub fn hat_cat(base: &Base, v: &BaseObj) -> Result<ECategory> {
    let id = base.id1(v)?;
    ECategory::new(
        format!("hat({})", v.label()),
        base.clone(),
        vec!["*".into()],
        vec![v.clone()],
        vec![vec![id.clone()]],
        vec![vec![vec![base.lunitor(&id)?.fwd]]],
        vec![base.id2(&id)?],
    )
}

/// A tight 1-cell `f : a → b` as an enriched functor `â → b̂` (the cell is
/// stored in tight normal form).
pub fn hat_mor(base: &Base, f: &Hom1) -> Result<EFunctor> {
    let cell = base
        .tighten(f)?
        .ok_or_else(|| CkError::NotTight("hat_mor requires a tight 1-cell".into()))?;
    let src = Arc::new(hat_cat(base, &f.src)?);
    let dst = Arc::new(hat_cat(base, &f.dst)?);
    let sq = base.vcomp(&base.lunitor(&cell)?.bwd, &base.runitor(&cell)?.fwd)?;
    EFunctor::new("hat-mor", src, dst, vec![0], vec![cell], vec![vec![sq]])
}

/// Any 1-cell `f : a → b` as a module `â ⇸ b̂` with unitor actions.
pub fn hat_loose(base: &Base, f: &Hom1) -> Result<EModule> {
    let src = Arc::new(hat_cat(base, &f.src)?);
    let dst = Arc::new(hat_cat(base, &f.dst)?);
    EModule::new(
        "hat-loose",
        src,
        dst,
        vec![vec![f.clone()]],
        vec![vec![vec![base.runitor(f)?.fwd]]],
        vec![vec![vec![base.lunitor(f)?.fwd]]],
    )
}

/// A base 2-cell as a module morphism between the hatted modules.
pub fn hat_2cell(base: &Base, a: &Hom2) -> Result<ModCell> {
    let src = Arc::new(hat_loose(base, &a.src)?);
    let dst = Arc::new(hat_loose(base, &a.dst)?);
    ModCell::new(src, dst, vec![vec![a.clone()]])
}

/// The identity functor.
pub fn efun_id(c: &Arc<ECategory>) -> Result<EFunctor> {
    let b = &c.base;
    let n = c.n_objects();
    let cells = (0..n).map(|x| b.id1(&c.extents[x])).collect::<Result<Vec<_>>>()?;
    let mut sq = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(b.vcomp(&b.runitor(&c.hom[x][y])?.bwd, &b.lunitor(&c.hom[x][y])?.fwd)?);
        }
        sq.push(row);
    }
    EFunctor::new(format!("id({})", c.name), c.clone(), c.clone(), (0..n).collect(), cells, sq)
}

/// Composite functor `E∘D` for `D : A → B`, `E : B → C`.
pub fn efun_compose(e: &EFunctor, d: &EFunctor) -> Result<EFunctor> {
    if d.dst != e.src {
        return Err(CkError::boundary("efun_compose: middle categories differ"));
    }
    let b = &d.src.base;
    let n = d.src.n_objects();
    let ob: Vec<usize> = (0..n).map(|x| e.ob[d.ob[x]]).collect();
    let cells = (0..n)
        .map(|x| b.compose1(&e.cells[d.ob[x]], &d.cells[x]))
        .collect::<Result<Vec<_>>>()?;
    let mut sq = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let (dx, dy) = (d.ob[x], d.ob[y]);
            let a1 = b.associator(&e.cells[dx], &d.cells[x], &d.src.hom[x][y])?;
            let a2 = b.associator(&e.cells[dx], &d.dst.hom[dx][dy], &d.cells[y])?;
            let a3 = b.associator(&e.dst.hom[ob[x]][ob[y]], &e.cells[dy], &d.cells[y])?;
            row.push(b.vcomp(
                &a3.fwd,
                &b.vcomp(
                    &b.whisker_right(&e.sq[dx][dy], &d.cells[y])?,
                    &b.vcomp(
                        &a2.bwd,
                        &b.vcomp(&b.whisker_left(&e.cells[dx], &d.sq[x][y])?, &a1.fwd)?,
                    )?,
                )?,
            )?);
        }
        sq.push(row);
    }
    EFunctor::new(format!("{}∘{}", e.name, d.name), d.src.clone(), e.dst.clone(), ob, cells, sq)
}

/// The identity icon on a functor.
pub fn eicon_id(d: &Arc<EFunctor>) -> Result<EIcon> {
    let b = &d.src.base;
    let comp = d.cells.iter().map(|c| b.id2(c)).collect::<Result<Vec<_>>>()?;
    EIcon::new(d.clone(), d.clone(), comp)
}

/// Associativity icon `(H∘G)∘F ⇒ H∘(G∘F)`.
pub fn efun_assoc_icon(h: &EFunctor, g: &EFunctor, f: &EFunctor) -> Result<EIcon> {
    let b = &f.src.base;
    let lhs = Arc::new(efun_compose(&efun_compose(h, g)?, f)?);
    let rhs = Arc::new(efun_compose(h, &efun_compose(g, f)?)?);
    let n = f.src.n_objects();
    let comp = (0..n)
        .map(|x| {
            Ok(b.associator(&h.cells[g.ob[f.ob[x]]], &g.cells[f.ob[x]], &f.cells[x])?.fwd)
        })
        .collect::<Result<Vec<_>>>()?;
    EIcon::new(lhs, rhs, comp)
}

/// Left unit icon `Id∘F ⇒ F`.
pub fn efun_lunit_icon(f: &EFunctor) -> Result<EIcon> {
    let b = &f.src.base;
    let lhs = Arc::new(efun_compose(&efun_id(&f.dst)?, f)?);
    let comp = f.cells.iter().map(|c| Ok(b.lunitor(c)?.fwd)).collect::<Result<Vec<_>>>()?;
    EIcon::new(lhs, Arc::new(f.clone()), comp)
}

/// Right unit icon `F∘Id ⇒ F`.
pub fn efun_runit_icon(f: &EFunctor) -> Result<EIcon> {
    let b = &f.src.base;
    let lhs = Arc::new(efun_compose(f, &efun_id(&f.src)?)?);
    let comp = f.cells.iter().map(|c| Ok(b.runitor(c)?.fwd)).collect::<Result<Vec<_>>>()?;
    EIcon::new(lhs, Arc::new(f.clone()), comp)
}

/// Every icon is a transformation: paste with the unit of the codomain.
pub fn icon_to_trans(i: &EIcon) -> Result<ETransformation> {
    let (d, e) = (&i.src, &i.dst);
    let b = &d.src.base;
    let n = d.src.n_objects();
    let comp = (0..n)
        .map(|x| {
            let dx = d.ob[x];
            b.vcomp(
                &b.whisker_right(&d.dst.unit[dx], &e.cells[x])?,
                &b.vcomp(&b.lunitor(&e.cells[x])?.bwd, &i.comp[x])?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ETransformation::new(d.clone(), e.clone(), comp)
}

/// The identity transformation on a functor.
pub fn etrans_id(d: &Arc<EFunctor>) -> Result<ETransformation> {
    icon_to_trans(&eicon_id(d)?)
}

/// Post-whisker a transformation by a functor: `F◁ϑ : F∘D ⇒ F∘E` for
/// `ϑ : D ⇒ E` with `D, E : A → B` and `F : B → C`.
pub fn etrans_whisker_post(f: &EFunctor, t: &ETransformation) -> Result<ETransformation> {
    let (d, e) = (&t.src, &t.dst);
    if d.dst != f.src {
        return Err(CkError::boundary("etrans_whisker_post: boundaries differ"));
    }
    let b = &d.src.base;
    let fd = Arc::new(efun_compose(f, d)?);
    let fe = Arc::new(efun_compose(f, e)?);
    let n = d.src.n_objects();
    let comp = (0..n)
        .map(|x| {
            let (dx, ex) = (d.ob[x], e.ob[x]);
            let a1 = b.associator(&f.cells[dx], &d.dst.hom[dx][ex], &e.cells[x])?;
            let a2 = b.associator(&f.dst.hom[f.ob[dx]][f.ob[ex]], &f.cells[ex], &e.cells[x])?;
            b.vcomp(
                &a2.fwd,
                &b.vcomp(
                    &b.whisker_right(&f.sq[dx][ex], &e.cells[x])?,
                    &b.vcomp(&a1.bwd, &b.whisker_left(&f.cells[dx], &t.comp[x])?)?,
                )?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ETransformation::new(fd, fe, comp)
}

/// Pre-whisker a transformation by a functor: `ϑ▷G : D∘G ⇒ E∘G` for
/// `ϑ : D ⇒ E` with `D, E : A → B` and `G : Z → A`.
pub fn etrans_whisker_pre(t: &ETransformation, g: &EFunctor) -> Result<ETransformation> {
    let (d, e) = (&t.src, &t.dst);
    if g.dst != d.src {
        return Err(CkError::boundary("etrans_whisker_pre: boundaries differ"));
    }
    let b = &d.src.base;
    let dg = Arc::new(efun_compose(d, g)?);
    let eg = Arc::new(efun_compose(e, g)?);
    let n = g.src.n_objects();
    let comp = (0..n)
        .map(|z| {
            let gz = g.ob[z];
            let a = b.associator(&d.dst.hom[d.ob[gz]][e.ob[gz]], &e.cells[gz], &g.cells[z])?;
            b.vcomp(&a.fwd, &b.whisker_right(&t.comp[gz], &g.cells[z])?)
        })
        .collect::<Result<Vec<_>>>()?;
    ETransformation::new(dg, eg, comp)
}

/// Vertical composite of transformations `ς·ϑ` for `ϑ : D ⇒ E`, `ς : E ⇒ F`.
pub fn etrans_vcompose(s: &ETransformation, t: &ETransformation) -> Result<ETransformation> {
    if t.dst != s.src {
        return Err(CkError::boundary("etrans_vcompose: middle functors differ"));
    }
    let (d, e, f) = (&t.src, &t.dst, &s.dst);
    let b = &d.src.base;
    let b_cat = &d.dst;
    let n = d.src.n_objects();
    let comp = (0..n)
        .map(|x| {
            let (dx, ex, fx) = (d.ob[x], e.ob[x], f.ob[x]);
            let a = b.associator(&b_cat.hom[dx][ex], &b_cat.hom[ex][fx], &f.cells[x])?;
            b.vcomp(
                &b.whisker_right(&b_cat.comp[dx][ex][fx], &f.cells[x])?,
                &b.vcomp(
                    &a.bwd,
                    &b.vcomp(&b.whisker_left(&b_cat.hom[dx][ex], &s.comp[x])?, &t.comp[x])?,
                )?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ETransformation::new(d.clone(), f.clone(), comp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::TightRule;

    fn span_base() -> Base {
        Base::span_finset(ArityClass::Finite)
    }

    #[test]
    fn discrete_category_validates() {
        let b = span_base();
        let c = discrete_cat(
            &b,
            "disc",
            vec!["p".into(), "q".into()],
            vec![BaseObj::Set(2), BaseObj::Set(3)],
        )
        .unwrap();
        assert!(c.is_discrete());
        let rep = validate_ecategory(&c).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn hat_category_validates_and_units_agree() {
        let b = span_base();
        let v = BaseObj::Set(3);
        let c = hat_cat(&b, &v).unwrap();
        let rep = validate_ecategory(&c).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        let id = b.id1(&v).unwrap();
        assert_eq!(b.lunitor(&id).unwrap().fwd, b.runitor(&id).unwrap().fwd);

        let bq = Base::boolean_quantale(ArityClass::Finite);
        let cq = hat_cat(&bq, &BaseObj::Set(2)).unwrap();
        assert!(validate_ecategory(&cq).unwrap().ok());
    }

    #[test]
    fn hat_functor_and_module_validate() {
        let b = span_base();
        let f = Hom1::span(2, 3, vec![1, 0], vec![2, 0]).unwrap();
        let d = hat_mor(&b, &f).unwrap();
        assert!(validate_efunctor(&d).unwrap().ok());
        let m = hat_loose(&b, &f).unwrap();
        let rep = validate_emodule(&m).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        // a non-tight span still yields a module, but not a functor
        let loose = Hom1::span(2, 2, vec![0, 0], vec![0, 1]).unwrap();
        assert!(hat_mor(&b, &loose).is_err());
        assert!(validate_emodule(&hat_loose(&b, &loose).unwrap()).unwrap().ok());
    }

    #[test]
    fn hat_2cell_is_equivariant() {
        let b = span_base();
        let f = Hom1::span(2, 2, vec![0, 1, 0], vec![1, 0, 1]).unwrap();
        let g = Hom1::span(2, 2, vec![0, 0, 1], vec![1, 1, 0]).unwrap();
        let iso = b.iso1(&f, &g).unwrap().unwrap();
        let cell = hat_2cell(&b, &iso.fwd).unwrap();
        assert!(validate_modcell(&cell).unwrap().ok());
    }

    #[test]
    fn identity_functor_and_composition() {
        let b = span_base();
        let f = Hom1::span(2, 3, vec![1, 0], vec![2, 0]).unwrap();
        let g = b.graph_span(3, 2, &[0, 1, 1]).unwrap();
        let df = hat_mor(&b, &f).unwrap();
        let dg = hat_mor(&b, &g).unwrap();
        let comp = efun_compose(&dg, &df).unwrap();
        assert!(validate_efunctor(&comp).unwrap().ok());
        let idc = efun_id(&df.src).unwrap();
        assert!(validate_efunctor(&idc).unwrap().ok());
        // unit icons validate
        let li = efun_lunit_icon(&df).unwrap();
        assert!(validate_eicon(&li).unwrap().ok());
        let ri = efun_runit_icon(&df).unwrap();
        assert!(validate_eicon(&ri).unwrap().ok());
        // transformations out of icons validate
        let t = etrans_id(&Arc::new(df.clone())).unwrap();
        assert!(validate_etrans(&t).unwrap().ok());
    }

    #[test]
    fn broken_unit_is_reported_lexicographically_first() {
        let b = span_base();
        // The two-element "max" monoid as a one-object category, with the
        // unit cell pointed at the absorbing element instead of the real
        // unit.  The table stays associative, so only the unit laws break,
        // and the validator lists the left law ahead of the right one.
        let v = BaseObj::Set(1);
        let hom = Hom1::span(1, 1, vec![0, 0], vec![0, 0]).unwrap();
        let m = b
            .hom2_span(&b.compose1(&hom, &hom).unwrap(), &hom, vec![0, 1, 1, 1])
            .unwrap();
        let bad_unit = b.hom2_span(&b.id1(&v).unwrap(), &hom, vec![1]).unwrap();
        let c = ECategory::new(
            "skew",
            b,
            vec!["*".into()],
            vec![v],
            vec![vec![hom]],
            vec![vec![vec![m]]],
            vec![bad_unit],
        )
        .unwrap();
        let rep = validate_ecategory(&c).unwrap();
        assert!(!rep.ok());
        assert_eq!(rep.failures[0].law, "unit-left");
    }

    #[test]
    fn chordate_rule_makes_everything_tight() {
        let b = span_base().with_tight_rule(TightRule::Chordate);
        let loose = Hom1::span(2, 2, vec![0, 0], vec![0, 1]).unwrap();
        assert!(b.is_tight(&loose).unwrap());
        // hat_mor now accepts it
        assert!(hat_mor(&b, &loose).is_ok());
    }
}
