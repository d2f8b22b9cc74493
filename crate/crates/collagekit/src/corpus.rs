//! The seeded corpus: every sweep in the suite draws its instances from
//! here, so a report is reproducible from its recorded seed alone.
//!
//! Each section derives its own ChaCha8 stream from the master seed and a
//! fixed salt. That keeps the sections decoupled — growing one sweep does
//! not reshuffle the instances of another — which matters both for
//! byte-identical reruns and for comparing smoke against full runs.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base::{ArityClass, Base, BaseObj, Hom1, H1};
use crate::collage::{
    cograph_category, collage, discrete_module, family_category, metric_collage_demo,
    monad_category, posetal_comp_cell, posetal_unit_cell, triangular_category, GlueSpec,
};
use crate::enriched::{discrete_cat, ECategory, EModule, ModCell};
use crate::error::{CkError, Result};
use crate::modcat::{mod_compose, mod_id};
use crate::oracle::{enumerate_finfunctors, minplus_shortest, prof_id, representable_prof, FinCategory, Profunctor};
use crate::quantale::Quantale;

/// Sweep size. Smoke is the default everywhere; full widens the seeded
/// sections without touching the fixed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Smoke,
    Full,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Scale::Smoke => "smoke",
            Scale::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Scale> {
        match s {
            "smoke" => Ok(Scale::Smoke),
            "full" => Ok(Scale::Full),
            other => Err(CkError::structural(format!(
                "unknown scale {other:?} (expected smoke or full)"
            ))),
        }
    }
}

/// A composable profunctor triple `s3 ∘ s2 ∘ s1`.
pub struct ProfTriple {
    pub label: String,
    pub s1: Profunctor,
    pub s2: Profunctor,
    pub s3: Profunctor,
}

/// Four composable modules `m[i] : D_i ⇸ D_{i+1}` over one base, for the
/// pentagon; the triangle uses adjacent pairs of the same chain.
pub struct ModChain {
    pub label: String,
    pub base: Base,
    pub mods: [Arc<EModule>; 4],
}

/// A composable 1-cell pair (`g ∘ f` is defined).
pub struct HomPair {
    pub label: String,
    pub base: Base,
    pub f: Hom1,
    pub g: Hom1,
}

/// A parallel 1-cell pair (same endpoints), for 2-cell bijection sweeps.
pub struct ParallelPair {
    pub label: String,
    pub base: Base,
    pub f: Hom1,
    pub g: Hom1,
}

/// A `Mod`-enriched category destined for the collage pipeline, tagged with
/// the base it is derived over.
pub struct CollageCase {
    pub label: String,
    pub kind: &'static str,
    pub cat: Arc<ECategory>,
    /// Whether the input has exactly one block, i.e. reads as a monad.
    pub one_object: bool,
}

/// Input data for one metric gluing demo (cap 10 throughout).
pub struct MetricCase {
    pub label: String,
    pub spaces: Vec<Vec<Vec<u8>>>,
    pub glues: Vec<GlueSpec>,
}

pub struct Corpus {
    pub seed: u64,
    pub scale: Scale,
    pub fincats: Vec<Arc<FinCategory>>,
    pub prof_triples: Vec<ProfTriple>,
    pub law_bases: Vec<(String, Base)>,
    pub mod_chains: Vec<ModChain>,
    pub hom_pairs: Vec<HomPair>,
    pub parallel_pairs: Vec<ParallelPair>,
    pub collages: Vec<CollageCase>,
    pub negative_control: Arc<ECategory>,
    pub plain_cats: Vec<(String, Arc<ECategory>)>,
    pub metric_cases: Vec<MetricCase>,
}

pub const METRIC_CAP: u8 = 10;

fn section_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

pub fn build(seed: u64, scale: Scale) -> Result<Corpus> {
    let fincats = fincats(seed, scale)?;
    let prof_triples = prof_triples(seed, scale, &fincats)?;
    let law_bases = law_bases()?;
    let mut mod_chains = Vec::new();
    let mut hom_pairs = Vec::new();
    let mut parallel_pairs = Vec::new();
    for (bi, (name, b)) in law_bases.iter().enumerate() {
        let salt = 0x6d6f_u64 + bi as u64;
        mod_chains.extend(chains_over(seed, salt, scale, name, b)?);
        let (comp, par) = hom_pairs_over(seed, salt ^ 0x686f, scale, name, b)?;
        hom_pairs.extend(comp);
        parallel_pairs.extend(par);
    }
    let collages = collage_cases()?;
    let negative_control = broken_monoid()?;
    let plain_cats = plain_cats(&collages)?;
    let metric_cases = metric_cases(seed, scale);
    Ok(Corpus {
        seed,
        scale,
        fincats,
        prof_triples,
        law_bases,
        mod_chains,
        hom_pairs,
        parallel_pairs,
        collages,
        negative_control,
        plain_cats,
        metric_cases,
    })
}

// ---------------------------------------------------------------------------
// finite categories

fn parallel_pair_cat() -> Result<FinCategory> {
    // two objects, two parallel arrows u, v : 0 → 1
    let mut comp = vec![vec![None; 4]; 4];
    comp[0][0] = Some(0);
    comp[1][1] = Some(1);
    comp[2][0] = Some(2);
    comp[3][0] = Some(3);
    comp[1][2] = Some(2);
    comp[1][3] = Some(3);
    FinCategory::new("pair", 2, vec![0, 1, 0, 0], vec![0, 1, 1, 1], vec![0, 1], comp)
}

fn random_preorder(rng: &mut ChaCha8Rng, name: String, n: usize) -> Result<FinCategory> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(0.4) {
                le[i][j] = true;
            }
        }
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    FinCategory::from_preorder(name, &le)
}

fn fincats(seed: u64, scale: Scale) -> Result<Vec<Arc<FinCategory>>> {
    let mut out = vec![
        Arc::new(FinCategory::discrete(1)),
        Arc::new(FinCategory::discrete(2)),
        Arc::new(FinCategory::walking_arrow()),
        Arc::new(parallel_pair_cat()?),
        Arc::new(FinCategory::from_preorder(
            "chain3",
            &[
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
        )?),
        Arc::new(FinCategory::from_monoid("z2", &[vec![0, 1], vec![1, 0]], 0)?),
        Arc::new(FinCategory::from_monoid("idem2", &[vec![0, 1], vec![1, 1]], 0)?),
    ];
    if scale == Scale::Full {
        out.push(Arc::new(FinCategory::from_preorder(
            "diamond",
            &[
                vec![true, true, true, true],
                vec![false, true, false, true],
                vec![false, false, true, true],
                vec![false, false, false, true],
            ],
        )?));
        out.push(Arc::new(FinCategory::from_monoid(
            "z3",
            &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            0,
        )?));
        let mut rng = section_rng(seed, 0x66636174);
        for i in 0..2 {
            out.push(Arc::new(random_preorder(&mut rng, format!("pre3-{i}"), 3)?));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// profunctor triples

/// Thin categories admit random profunctors by closure: pick a relation and
/// saturate it covariantly along src-arrows and contravariantly along
/// dst-arrows; the actions are then forced and total where required.
fn thin_random_prof(
    rng: &mut ChaCha8Rng,
    name: String,
    k: &FinCategory,
    l: &FinCategory,
) -> Result<Profunctor> {
    let (nk, nl) = (k.n_objects, l.n_objects);
    let mut rel = vec![vec![false; nl]; nk];
    for row in rel.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random_bool(0.5);
        }
    }
    loop {
        let mut changed = false;
        for u in 0..nk {
            for x in 0..nl {
                if !rel[u][x] {
                    continue;
                }
                for f in 0..k.n_morphisms() {
                    if k.mor_src[f] == u && !rel[k.mor_dst[f]][x] {
                        rel[k.mor_dst[f]][x] = true;
                        changed = true;
                    }
                }
                for g in 0..l.n_morphisms() {
                    if l.mor_dst[g] == x && !rel[u][l.mor_src[g]] {
                        rel[u][l.mor_src[g]] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut el_k = Vec::new();
    let mut el_l = Vec::new();
    let mut index = vec![vec![None; nl]; nk];
    for (u, row) in rel.iter().enumerate() {
        for (x, &present) in row.iter().enumerate() {
            if present {
                index[u][x] = Some(el_k.len());
                el_k.push(u);
                el_l.push(x);
            }
        }
    }
    let n = el_k.len();
    let mut ract = vec![vec![None; k.n_morphisms()]; n];
    let mut lact = vec![vec![None; l.n_morphisms()]; n];
    for e in 0..n {
        for f in 0..k.n_morphisms() {
            if k.mor_src[f] == el_k[e] {
                ract[e][f] = index[k.mor_dst[f]][el_l[e]];
            }
        }
        for g in 0..l.n_morphisms() {
            if l.mor_dst[g] == el_l[e] {
                lact[e][g] = index[el_k[e]][l.mor_src[g]];
            }
        }
    }
    let p = Profunctor { name, src: k.clone(), dst: l.clone(), el_k, el_l, ract, lact };
    p.validate()?;
    Ok(p)
}

/// Elements with random multiplicity between discrete categories; the only
/// actions are identities.
fn discrete_random_prof(
    rng: &mut ChaCha8Rng,
    name: String,
    k: &FinCategory,
    l: &FinCategory,
) -> Result<Profunctor> {
    let mut el_k = Vec::new();
    let mut el_l = Vec::new();
    for u in 0..k.n_objects {
        for x in 0..l.n_objects {
            for _ in 0..rng.random_range(0..=2) {
                el_k.push(u);
                el_l.push(x);
            }
        }
    }
    let n = el_k.len();
    let mut ract = vec![vec![None; k.n_morphisms()]; n];
    let mut lact = vec![vec![None; l.n_morphisms()]; n];
    for e in 0..n {
        ract[e][k.identity[el_k[e]]] = Some(e);
        lact[e][l.identity[el_l[e]]] = Some(e);
    }
    let p = Profunctor { name, src: k.clone(), dst: l.clone(), el_k, el_l, ract, lact };
    p.validate()?;
    Ok(p)
}

fn seeded_representable(
    rng: &mut ChaCha8Rng,
    name: String,
    k: &FinCategory,
    l: &FinCategory,
) -> Result<Profunctor> {
    let fs = enumerate_finfunctors(k, l, 4096)?;
    if fs.is_empty() {
        return Err(CkError::structural(format!(
            "no functors {} → {} to represent",
            k.name, l.name
        )));
    }
    let d = &fs[rng.random_range(0..fs.len())];
    let mut p = representable_prof(k, l, d);
    p.name = name;
    Ok(p)
}

fn prof_triples(seed: u64, scale: Scale, pool: &[Arc<FinCategory>]) -> Result<Vec<ProfTriple>> {
    let mut rng = section_rng(seed, 0x70726f66);
    let want = match scale {
        Scale::Smoke => 50,
        Scale::Full => 120,
    };
    // thin categories: discretes and preorders (everything but the monoids
    // and the parallel pair)
    let thin: Vec<&Arc<FinCategory>> = pool
        .iter()
        .filter(|c| {
            c.name.starts_with("chain")
                || c.name.starts_with("pre3")
                || c.name == "diamond"
                || c.name == "walking-arrow"
                || c.name.starts_with("disc")
        })
        .collect();
    let discrete: Vec<&Arc<FinCategory>> =
        pool.iter().filter(|c| c.name.starts_with("disc")).collect();

    let mut out = Vec::with_capacity(want);
    for i in 0..want {
        let label = format!("triple-{i}");
        let triple = match i % 4 {
            0 => {
                // representables along a functor chain
                let ks: Vec<&Arc<FinCategory>> =
                    (0..4).map(|_| &pool[rng.random_range(0..pool.len())]).collect();
                ProfTriple {
                    label: label.clone(),
                    s1: seeded_representable(&mut rng, format!("{label}.1"), ks[0], ks[1])?,
                    s2: seeded_representable(&mut rng, format!("{label}.2"), ks[1], ks[2])?,
                    s3: seeded_representable(&mut rng, format!("{label}.3"), ks[2], ks[3])?,
                }
            }
            1 => {
                // an identity slot between two thin randoms
                let a = thin[rng.random_range(0..thin.len())];
                let b = thin[rng.random_range(0..thin.len())];
                ProfTriple {
                    label: label.clone(),
                    s1: thin_random_prof(&mut rng, format!("{label}.1"), a, b)?,
                    s2: prof_id(b),
                    s3: thin_random_prof(&mut rng, format!("{label}.3"), b, a)?,
                }
            }
            2 => {
                let ks: Vec<&Arc<FinCategory>> =
                    (0..4).map(|_| thin[rng.random_range(0..thin.len())]).collect();
                ProfTriple {
                    label: label.clone(),
                    s1: thin_random_prof(&mut rng, format!("{label}.1"), ks[0], ks[1])?,
                    s2: thin_random_prof(&mut rng, format!("{label}.2"), ks[1], ks[2])?,
                    s3: thin_random_prof(&mut rng, format!("{label}.3"), ks[2], ks[3])?,
                }
            }
            _ => {
                let ks: Vec<&Arc<FinCategory>> =
                    (0..4).map(|_| discrete[rng.random_range(0..discrete.len())]).collect();
                ProfTriple {
                    label: label.clone(),
                    s1: discrete_random_prof(&mut rng, format!("{label}.1"), ks[0], ks[1])?,
                    s2: discrete_random_prof(&mut rng, format!("{label}.2"), ks[1], ks[2])?,
                    s3: discrete_random_prof(&mut rng, format!("{label}.3"), ks[2], ks[3])?,
                }
            }
        };
        out.push(triple);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// law bases and module chains

fn diamond_quantale() -> Result<Quantale> {
    // the powerset of a two-element set: join is union, tensor is
    // intersection, unit is the top
    Quantale::new(
        "diamond",
        vec![
            vec![0, 1, 2, 3],
            vec![1, 1, 3, 3],
            vec![2, 3, 2, 3],
            vec![3, 3, 3, 3],
        ],
        vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 2, 2],
            vec![0, 1, 2, 3],
        ],
        3,
    )
}

fn law_bases() -> Result<Vec<(String, Base)>> {
    Ok(vec![
        ("span".into(), Base::span_finset(ArityClass::Finite)),
        ("bool".into(), Base::boolean_quantale(ArityClass::Finite)),
        (
            "minplus".into(),
            Base::finite_quantale(Quantale::min_plus(METRIC_CAP), ArityClass::Finite),
        ),
        ("diamond".into(), Base::finite_quantale(diamond_quantale()?, ArityClass::Finite)),
        (
            "derived".into(),
            Base::mod_derived(Base::span_finset(ArityClass::Finite), ArityClass::Finite),
        ),
    ])
}

/// A random extent for discrete categories over the base.
fn random_extent(rng: &mut ChaCha8Rng, b: &Base) -> Result<BaseObj> {
    if let Some(objs) = derived_points(b)? {
        return Ok(objs);
    }
    if b.quantale().is_some() {
        // finite-quantale bases only carry the unit object; relational bases
        // carry finite sets
        if matches!(b.enumerate_objects(1).first(), Some(BaseObj::One)) {
            return Ok(BaseObj::One);
        }
    }
    Ok(BaseObj::Set(rng.random_range(1..=2)))
}

/// For the derived base: a fixed point category over the inner span base.
fn derived_points(b: &Base) -> Result<Option<BaseObj>> {
    match b.inner() {
        Some(inner) => {
            let pt = Arc::new(discrete_cat(
                &inner,
                "P",
                vec!["*".into()],
                vec![BaseObj::Set(1)],
            )?);
            Ok(Some(BaseObj::Cat(pt)))
        }
        None => Ok(None),
    }
}

/// A random 1-cell of the base between the given extents.
fn random_hom1(rng: &mut ChaCha8Rng, b: &Base, src: &BaseObj, dst: &BaseObj) -> Result<Hom1> {
    match (src, dst) {
        (BaseObj::Cat(cs), BaseObj::Cat(cd)) => {
            let mut comp = Vec::with_capacity(cd.n_objects());
            for u in 0..cd.n_objects() {
                let mut row = Vec::with_capacity(cs.n_objects());
                for x in 0..cs.n_objects() {
                    row.push(random_hom1(
                        rng,
                        &cs.base,
                        &cs.extents[x],
                        &cd.extents[u],
                    )?);
                }
                comp.push(row);
            }
            let m = Arc::new(discrete_module(format!("m{}", rng.random_range(0..1000)), cs, cd, comp)?);
            Ok(Hom1 {
                src: src.clone(),
                dst: dst.clone(),
                data: H1::Mod(m),
            })
        }
        _ => {
            if let Some(q) = b.quantale() {
                let (rows, cols) = (dst.dim(), src.dim());
                let e = (0..rows * cols)
                    .map(|_| rng.random_range(0..q.size) as u8)
                    .collect();
                let mut h = Hom1::mat(rows, cols, e)?;
                // mat() assumes Set endpoints; finite-quantale extents are One
                h.src = src.clone();
                h.dst = dst.clone();
                Ok(h)
            } else {
                let apex = rng.random_range(0..=2);
                let left = (0..apex).map(|_| rng.random_range(0..src.dim())).collect();
                let right = (0..apex).map(|_| rng.random_range(0..dst.dim())).collect();
                Hom1::span(src.dim(), dst.dim(), left, right)
            }
        }
    }
}

fn chains_over(
    seed: u64,
    salt: u64,
    scale: Scale,
    base_name: &str,
    b: &Base,
) -> Result<Vec<ModChain>> {
    let mut rng = section_rng(seed, salt);
    let want = match scale {
        Scale::Smoke => 20,
        Scale::Full => 30,
    };
    let mut out = Vec::with_capacity(want);
    for i in 0..want {
        let mut cats = Vec::with_capacity(5);
        for j in 0..5 {
            let n_obj = if b.inner().is_some() {
                1
            } else {
                rng.random_range(1..=2)
            };
            let extents: Vec<BaseObj> =
                (0..n_obj).map(|_| random_extent(&mut rng, b)).collect::<Result<_>>()?;
            let names = (0..n_obj).map(|k| format!("c{i}.{j}.{k}")).collect();
            cats.push(Arc::new(discrete_cat(b, format!("D{i}.{j}"), names, extents)?));
        }
        let mut mods = Vec::with_capacity(4);
        for j in 0..4 {
            let (s, d) = (&cats[j], &cats[j + 1]);
            let mut comp = Vec::with_capacity(d.n_objects());
            for u in 0..d.n_objects() {
                let mut row = Vec::with_capacity(s.n_objects());
                for x in 0..s.n_objects() {
                    row.push(random_hom1(&mut rng, b, &s.extents[x], &d.extents[u])?);
                }
                comp.push(row);
            }
            mods.push(Arc::new(discrete_module(
                format!("{base_name}.{i}.{j}"),
                s,
                d,
                comp,
            )?));
        }
        let mods: [Arc<EModule>; 4] = match mods.try_into() {
            Ok(a) => a,
            Err(_) => unreachable!("four modules were just built"),
        };
        out.push(ModChain {
            label: format!("{base_name}-chain-{i}"),
            base: b.clone(),
            mods,
        });
    }
    Ok(out)
}

fn hom_pairs_over(
    seed: u64,
    salt: u64,
    scale: Scale,
    base_name: &str,
    b: &Base,
) -> Result<(Vec<HomPair>, Vec<ParallelPair>)> {
    let mut rng = section_rng(seed, salt);
    let want = match scale {
        Scale::Smoke => 10,
        Scale::Full => 16,
    };
    let mut comp = Vec::with_capacity(want);
    let mut par = Vec::with_capacity(want);
    for i in 0..want {
        let a = random_extent(&mut rng, b)?;
        let m = random_extent(&mut rng, b)?;
        let c = random_extent(&mut rng, b)?;
        let f = random_hom1(&mut rng, b, &a, &m)?;
        let g = random_hom1(&mut rng, b, &m, &c)?;
        comp.push(HomPair {
            label: format!("{base_name}-comp-{i}"),
            base: b.clone(),
            f,
            g,
        });
        let f = random_hom1(&mut rng, b, &a, &m)?;
        let g = random_hom1(&mut rng, b, &a, &m)?;
        par.push(ParallelPair {
            label: format!("{base_name}-par-{i}"),
            base: b.clone(),
            f,
            g,
        });
    }
    Ok((comp, par))
}

// ---------------------------------------------------------------------------
// collage inputs

fn span_point(b: &Base, name: &str) -> Result<Arc<ECategory>> {
    Ok(Arc::new(discrete_cat(b, name, vec![format!("{name}*")], vec![BaseObj::Set(1)])?))
}

/// A one-object module monad presented by a multiplication table on the
/// two-element carrier `{e, a}`; `mul` maps the composite carrier (first
/// factor major) to `{e, a}`.
fn monoid_monad(b: &Base, name: &str, mul: Vec<usize>) -> Result<Arc<ECategory>> {
    let a_cat = span_point(b, &format!("{name}-blk"))?;
    let m_span = Hom1::span(1, 1, vec![0, 0], vec![0, 0])?;
    let m = Arc::new(discrete_module(
        format!("{name}-t"),
        &a_cat,
        &a_cat,
        vec![vec![m_span]],
    )?);
    let mm = mod_compose(&m, &m)?;
    let mult_map = b.hom2_span(&mm.composite.comp[0][0], &m.comp[0][0], mul)?;
    let mult = ModCell::new(Arc::new(mm.composite), m.clone(), vec![vec![mult_map]])?;
    let idm = mod_id(&a_cat)?;
    let unit_map = b.hom2_span(&idm.comp[0][0], &m.comp[0][0], vec![0])?;
    let unit = ModCell::new(Arc::new(idm), m.clone(), vec![vec![unit_map]])?;
    monad_category(name, &m, mult, unit)
}

fn bool_block(b: &Base, name: &str, n: usize) -> Result<Arc<ECategory>> {
    Ok(Arc::new(discrete_cat(b, name, vec![format!("{name}*")], vec![BaseObj::Set(n)])?))
}

fn collage_cases() -> Result<Vec<CollageCase>> {
    let sb = Base::span_finset(ArityClass::Finite);
    let bb = Base::boolean_quantale(ArityClass::Finite);
    let mut out = Vec::new();

    // span: a two-point family
    let x = span_point(&sb, "X")?;
    let y = span_point(&sb, "Y")?;
    out.push(CollageCase {
        label: "span-family".into(),
        kind: "span",
        cat: family_category("family(X,Y)", &[x.clone(), y.clone()])?,
        one_object: false,
    });

    // span: the cograph of a singleton module
    let m = Arc::new(discrete_module(
        "arrow",
        &y,
        &x,
        vec![vec![Hom1::span(1, 1, vec![0], vec![0])?]],
    )?);
    out.push(CollageCase {
        label: "span-cograph".into(),
        kind: "span",
        cat: cograph_category(&m)?,
        one_object: false,
    });

    // span: two module monads on a point — the idempotent monoid and Z/2.
    // The composite carrier is first-factor major, so Z/2 multiplication
    // reads [0,1,1,0].
    out.push(CollageCase {
        label: "span-kleisli-idem2".into(),
        kind: "span",
        cat: monoid_monad(&sb, "idem2", vec![0, 1, 1, 1])?,
        one_object: true,
    });
    out.push(CollageCase {
        label: "span-kleisli-z2".into(),
        kind: "span",
        cat: monoid_monad(&sb, "z2", vec![0, 1, 1, 0])?,
        one_object: true,
    });

    // bool: a family with mixed extents
    let p1 = bool_block(&bb, "P", 1)?;
    let p2 = bool_block(&bb, "Q", 2)?;
    out.push(CollageCase {
        label: "bool-family".into(),
        kind: "bool",
        cat: family_category("family(P,Q)", &[p1.clone(), p2.clone()])?,
        one_object: false,
    });

    // bool: the cograph of a relation
    let rel = Arc::new(discrete_module(
        "rel",
        &p2,
        &p1,
        vec![vec![Hom1::mat(1, 2, vec![1, 0])?]],
    )?);
    out.push(CollageCase {
        label: "bool-cograph".into(),
        kind: "bool",
        cat: cograph_category(&rel)?,
        one_object: false,
    });

    // bool: the monad of a reflexive transitive relation on two points
    let blk = bool_block(&bb, "R", 2)?;
    let r = Arc::new(discrete_module(
        "le",
        &blk,
        &blk,
        vec![vec![Hom1::mat(2, 2, vec![1, 1, 0, 1])?]],
    )?);
    let mult = posetal_comp_cell(&bb, &r, &r, &r)?;
    let unit = posetal_unit_cell(&bb, &blk, &r)?;
    out.push(CollageCase {
        label: "bool-kleisli".into(),
        kind: "bool",
        cat: monad_category("pre2", &r, mult, unit)?,
        one_object: true,
    });

    // bool: a triangular category on three points, with the (0,2) slot
    // absorbing the composite
    let t0 = bool_block(&bb, "T0", 1)?;
    let t1 = bool_block(&bb, "T1", 1)?;
    let t2 = bool_block(&bb, "T2", 1)?;
    let m01 = Arc::new(discrete_module("t01", &t1, &t0, vec![vec![Hom1::mat(1, 1, vec![1])?]])?);
    let m12 = Arc::new(discrete_module("t12", &t2, &t1, vec![vec![Hom1::mat(1, 1, vec![1])?]])?);
    let m02 = Arc::new(discrete_module("t02", &t2, &t0, vec![vec![Hom1::mat(1, 1, vec![1])?]])?);
    let mult = posetal_comp_cell(&bb, &m01, &m12, &m02)?;
    out.push(CollageCase {
        label: "bool-triangular".into(),
        kind: "bool",
        cat: triangular_category(
            "tri(T0,T1,T2)",
            &[t0, t1, t2],
            &[(0, 1, m01), (1, 2, m12), (0, 2, m02)],
            &[(0, 1, 2, mult)],
        )?,
        one_object: false,
    });

    // min-plus: two fixed metric gluings, read back as Mod-enriched inputs
    for (label, spaces, glues) in [
        (
            "minplus-gluing-a",
            vec![vec![vec![0]], vec![vec![0, 3], vec![3, 0]]],
            vec![GlueSpec { from: 0, to: 1, table: vec![vec![2, 5]] }],
        ),
        (
            "minplus-gluing-b",
            vec![vec![vec![0, 2], vec![2, 0]], vec![vec![0, 1], vec![1, 0]]],
            vec![GlueSpec { from: 0, to: 1, table: vec![vec![4, 2], vec![7, 3]] }],
        ),
    ] {
        let demo = metric_collage_demo(&spaces, &glues, METRIC_CAP)?;
        out.push(CollageCase {
            label: label.into(),
            kind: "minplus",
            cat: demo.result.input,
            one_object: false,
        });
    }

    Ok(out)
}

/// The negative control: the multiplication collapses to the constant map
/// at `e`, which still assembles (a constant map is associative and
/// compatible with every cocone) but breaks the unit law.
fn broken_monoid() -> Result<Arc<ECategory>> {
    monoid_monad(&Base::span_finset(ArityClass::Finite), "bad-monoid", vec![0; 4])
}

/// Plain enriched categories for the decomposition sweep: collage totals
/// plus a discrete category with mixed extents.
fn plain_cats(cases: &[CollageCase]) -> Result<Vec<(String, Arc<ECategory>)>> {
    let mut out = Vec::new();
    for case in cases {
        if matches!(
            case.label.as_str(),
            "span-cograph" | "span-kleisli-idem2" | "bool-kleisli" | "bool-triangular"
        ) {
            let r = collage(&case.cat)?;
            out.push((format!("total({})", case.label), r.total));
        }
    }
    let sb = Base::span_finset(ArityClass::Finite);
    out.push((
        "discrete-mixed".into(),
        Arc::new(discrete_cat(
            &sb,
            "disc3",
            vec!["a".into(), "b".into(), "c".into()],
            vec![BaseObj::Set(1), BaseObj::Set(2), BaseObj::Set(3)],
        )?),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// metric cases

fn metric_cases(seed: u64, scale: Scale) -> Vec<MetricCase> {
    let mut rng = section_rng(seed, 0x6d657472);
    let want = match scale {
        Scale::Smoke => 10,
        Scale::Full => 14,
    };
    let mut out = Vec::with_capacity(want);
    for i in 0..want {
        let blocks = 2 + (i % 2);
        let mut spaces = Vec::with_capacity(blocks);
        for _ in 0..blocks {
            let n = rng.random_range(1..=3);
            let mut d = vec![vec![0u8; n]; n];
            for x in 0..n {
                for y in 0..n {
                    if x != y {
                        d[x][y] = rng.random_range(1..=6);
                    }
                }
            }
            // close under min-plus so the triangle law holds by construction
            spaces.push(minplus_shortest(&d, METRIC_CAP));
        }
        let mut glues = Vec::new();
        for j in 1..blocks {
            glues.push(random_glue(&mut rng, &spaces, j - 1, j));
        }
        if blocks == 3 && rng.random_bool(0.5) {
            glues.push(random_glue(&mut rng, &spaces, 0, 2));
        }
        out.push(MetricCase { label: format!("metric-{i}"), spaces, glues });
    }
    out
}

fn random_glue(rng: &mut ChaCha8Rng, spaces: &[Vec<Vec<u8>>], from: usize, to: usize) -> GlueSpec {
    let table = (0..spaces[from].len())
        .map(|_| (0..spaces[to].len()).map(|_| rng.random_range(1..=9)).collect())
        .collect();
    GlueSpec { from, to, table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriched::validate_ecategory;
    use crate::oracle::prof_compose;

    #[test]
    fn smoke_corpus_builds_and_meets_counts() {
        let c = build(7, Scale::Smoke).unwrap();
        assert!(c.prof_triples.len() >= 50);
        assert_eq!(c.law_bases.len(), 5);
        for (name, _) in &c.law_bases {
            let n = c.mod_chains.iter().filter(|ch| ch.label.starts_with(name.as_str())).count();
            assert!(n >= 20, "{name}: {n} chains");
        }
        assert_eq!(c.collages.len(), 10);
        assert_eq!(c.collages.iter().filter(|k| k.kind == "minplus").count(), 2);
        assert!(c.metric_cases.len() >= 10);
        assert!(c.plain_cats.len() >= 5);
    }

    #[test]
    fn prof_triples_compose() {
        let c = build(7, Scale::Smoke).unwrap();
        for t in &c.prof_triples {
            let ts = prof_compose(&t.s2, &t.s1).unwrap();
            prof_compose(&t.s3, &ts).unwrap();
        }
    }

    #[test]
    fn chains_compose_and_collages_validate() {
        let c = build(7, Scale::Smoke).unwrap();
        for ch in c.mod_chains.iter().step_by(7) {
            for j in 0..3 {
                mod_compose(&ch.mods[j + 1], &ch.mods[j]).unwrap();
            }
        }
        for case in &c.collages {
            validate_ecategory(&case.cat).unwrap();
        }
        validate_ecategory(&c.negative_control).unwrap();
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = build(11, Scale::Smoke).unwrap();
        let b = build(11, Scale::Smoke).unwrap();
        let digest = |c: &Corpus| {
            let mut d = Vec::new();
            for t in &c.prof_triples {
                d.push(t.s1.el_k.len() + t.s2.el_k.len() + t.s3.el_k.len());
            }
            for ch in &c.mod_chains {
                d.push(ch.mods.iter().map(|m| m.comp[0][0].carrier_size()).sum());
            }
            for m in &c.metric_cases {
                d.push(m.spaces.iter().map(|s| s.len()).sum::<usize>() + m.glues.len());
            }
            d
        };
        assert_eq!(digest(&a), digest(&b));
    }

    #[test]
    fn full_corpus_builds() {
        let c = build(7, Scale::Full).unwrap();
        assert!(c.prof_triples.len() >= 120);
        assert!(c.fincats.len() >= 11);
    }
}
