//! Command dispatch: builds library objects from a document and collects
//! verdicts into an [`Output`].

use std::collections::BTreeMap;

use grla_core::affine::{
    check_auto_conditions, fixed_subalgebra, make_twisted_automorphism, window_gr_checks,
    window_tameness, AffAlgebra, AffineError, FixedPoints,
};
use grla_core::exactfield::Scalar;
use grla_core::grrs::{CheckOptions, GrrsPresentation, DEFAULT_STRING_CAP, DEFAULT_WINDOW};
use grla_core::lattice::{fmt_int_vec, CosetUnion, IntLattice};
use grla_core::liealg::{intrinsic_decomposition, GrlaHandle, StructLieAlgebra};
use grla_core::linalg::{fmt_vec, Matrix, Subspace, Vector};
use grla_core::report::Report;
use grla_core::torus::{core_mod_center_pipeline, TorusError};
use grla_core::window::GradedWindow;
use thiserror::Error;

use crate::input::{
    AlgebraInput, AutomorphismInput, GrrsInput, InputDocument, Kind, Payload, Structure,
};
use crate::output::{Output, Section};

/// Default radius of algebra windows.
pub const DEFAULT_ALGEBRA_WINDOW: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckGrrs,
    DecomposeGrrs,
    Isolated,
    CheckLie,
    DecomposeLie,
    Affinize,
    FixedPoints,
    LieTorus,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckGrrs => "check-grrs",
            Command::DecomposeGrrs => "decompose-grrs",
            Command::Isolated => "isolated",
            Command::CheckLie => "check-lie",
            Command::DecomposeLie => "decompose-lie",
            Command::Affinize => "affinize",
            Command::FixedPoints => "fixed-points",
            Command::LieTorus => "lie-torus",
        }
    }

    fn on_root_system(self) -> bool {
        matches!(
            self,
            Command::CheckGrrs | Command::DecomposeGrrs | Command::Isolated
        )
    }

    fn accepts(self, kind: Kind) -> bool {
        match self {
            Command::CheckGrrs | Command::DecomposeGrrs | Command::Isolated => true,
            Command::CheckLie | Command::DecomposeLie | Command::LieTorus => kind != Kind::Grrs,
            Command::Affinize => matches!(kind, Kind::LieAlg | Kind::Affinize),
            Command::FixedPoints => kind == Kind::FixedPoint,
        }
    }
}

/// Command-line overrides of the document options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    pub window: Option<i64>,
    pub string_cap: Option<u32>,
}

/// Errors in the input rather than in the mathematics; exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct InputRejected(pub String);

fn rejected<T>(msg: impl Into<String>) -> Result<T, InputRejected> {
    Err(InputRejected(msg.into()))
}

/// Resolved settings for one run.
struct Ctx {
    window: i64,
    opts: CheckOptions,
}

pub fn run_command(
    cmd: Command,
    doc: &InputDocument,
    input_name: &str,
    flags: Flags,
) -> Result<Output, InputRejected> {
    let kind = doc.kind();
    if !cmd.accepts(kind) {
        return rejected(format!(
            "{} does not accept {} documents",
            cmd.name(),
            kind.name()
        ));
    }
    let default_window = if cmd.on_root_system() && kind == Kind::Grrs {
        DEFAULT_WINDOW
    } else {
        DEFAULT_ALGEBRA_WINDOW
    };
    let window = flags
        .window
        .or(doc.options.window)
        .unwrap_or(default_window);
    let cap = flags
        .string_cap
        .or(doc.options.string_cap)
        .unwrap_or(DEFAULT_STRING_CAP);
    if window < 0 {
        return rejected("window radius must be nonnegative");
    }
    if cap == 0 {
        return rejected("string cap must be positive");
    }
    // root-system checks on algebras use the default root window; the radius is the algebra's
    let grrs_window = if kind == Kind::Grrs {
        window
    } else {
        DEFAULT_WINDOW
    };
    let ctx = Ctx {
        window,
        opts: CheckOptions {
            window: grrs_window,
            cap,
            in_span: false,
        },
    };
    let mut out = Output::new(cmd.name(), input_name, kind.name());
    if let Some(n) = &doc.name {
        out.settings.push(("name".into(), n.clone()));
    }
    if kind == Kind::Grrs {
        out.settings.push(("window".into(), window.to_string()));
    } else {
        out.settings
            .push(("algebra window".into(), window.to_string()));
        out.settings
            .push(("root window".into(), grrs_window.to_string()));
    }
    out.settings.push(("string cap".into(), cap.to_string()));
    let res = match cmd {
        Command::CheckGrrs | Command::DecomposeGrrs | Command::Isolated => {
            root_system(doc, &ctx).map(|p| grrs_command(cmd, &p, &ctx, &mut out))
        }
        Command::CheckLie => check_lie(doc, &ctx, &mut out),
        Command::DecomposeLie => handle_of(doc, &ctx, &mut out).map(|h| {
            if let Some(hd) = h {
                decompose_lie(&hd, &ctx, &mut out)
            }
        }),
        Command::Affinize => affinize(doc, &ctx, &mut out),
        Command::FixedPoints => fixed_points(doc, &ctx, &mut out),
        Command::LieTorus => handle_of(doc, &ctx, &mut out).and_then(|h| match h {
            Some(hd) => lie_torus(&hd, &ctx, &mut out),
            None => Ok(()),
        }),
    };
    match res {
        Ok(()) => Ok(out),
        Err(Failure::Input(e)) => Err(e),
        Err(Failure::Math(e)) => {
            out.error = Some(e);
            Ok(out)
        }
    }
}

/// Either invalid input or a computation refused because an axiom fails.
enum Failure {
    Input(InputRejected),
    Math(String),
}

impl From<InputRejected> for Failure {
    fn from(e: InputRejected) -> Self {
        Failure::Input(e)
    }
}

fn math(e: impl ToString) -> Failure {
    Failure::Math(e.to_string())
}

fn matrix(rows: &[Vec<Scalar>], cols: usize) -> Matrix {
    Matrix::from_rows(rows, cols)
}

pub fn build_presentation(g: &GrrsInput) -> Result<GrrsPresentation, InputRejected> {
    let dim = g.gram.len();
    let nu = g.null_basis.len();
    let families = g
        .families
        .iter()
        .map(|f| {
            (
                f.base.clone(),
                CosetUnion::new(
                    IntLattice::from_generators(nu, &f.modulus),
                    f.residues.clone(),
                ),
            )
        })
        .collect();
    GrrsPresentation::new(matrix(&g.gram, dim), g.null_basis.clone(), families)
        .or_else(|e| rejected(format!("invalid root system presentation: {}", e)))
}

pub fn build_algebra(a: &AlgebraInput) -> Result<StructLieAlgebra, InputRejected> {
    let idx = |s: &str| {
        a.basis
            .iter()
            .position(|b| b == s)
            .expect("labels validated on parse")
    };
    let cartan: Vec<usize> = a.cartan.iter().map(|c| idx(c)).collect();
    let res = match &a.structure {
        Structure::Brackets { form, brackets } => {
            let entries: Vec<_> = brackets
                .iter()
                .map(|b| {
                    (
                        idx(&b.x),
                        idx(&b.y),
                        b.value.iter().map(|(c, l)| (idx(l), c.clone())).collect(),
                    )
                })
                .collect();
            StructLieAlgebra::new(
                a.basis.clone(),
                &entries,
                matrix(form, a.basis.len()),
                cartan,
            )
        }
        Structure::Matrices(ms) => {
            let mats: Vec<Matrix> = ms.iter().map(|m| matrix(m, m.len())).collect();
            StructLieAlgebra::from_matrices(a.basis.clone(), &mats, cartan)
        }
    };
    res.or_else(|e| rejected(format!("invalid algebra: {}", e)))
}

fn build_aff(a: &AlgebraInput) -> Result<AffAlgebra, Failure> {
    AffAlgebra::new(build_algebra(a)?).map_err(math)
}

fn build_twist(
    aff: &AffAlgebra,
    s: &AutomorphismInput,
) -> Result<grla_core::affine::TwistedAutomorphism, Failure> {
    let n = s.matrix.len();
    make_twisted_automorphism(aff, matrix(&s.matrix, n), s.order).map_err(|e| match e {
        AffineError::NotAutomorphism(_)
        | AffineError::NotIsometry(_)
        | AffineError::CartanNotPreserved(_) => Failure::Input(InputRejected(e.to_string())),
        other => math(other),
    })
}

/// Fixed points after the four conditions; `None` (with sections filled) when a condition fails.
fn fixed(
    aff: &AffAlgebra,
    s: &AutomorphismInput,
    ctx: &Ctx,
    out: &mut Output,
) -> Result<Option<FixedPoints>, Failure> {
    let twist = build_twist(aff, s)?;
    let cond = check_auto_conditions(aff, &twist, ctx.window);
    let mut sec = Section::new("automorphism conditions");
    sec.fact("order", twist.order)
        .fact("zeta", &twist.zeta)
        .checks(&cond);
    out.sections.push(sec);
    if !cond.all_pass() {
        return Ok(None);
    }
    fixed_subalgebra(aff, &twist, ctx.window)
        .map(Some)
        .map_err(math)
}

fn root_system(doc: &InputDocument, ctx: &Ctx) -> Result<GrrsPresentation, Failure> {
    match &doc.payload {
        Payload::Grrs(g) => Ok(build_presentation(g)?),
        Payload::LieAlg(a) => Ok(build_algebra(a)?.handle().map_err(math)?.presentation),
        Payload::Affinize(a) => Ok(build_aff(a)?.root_system().map_err(math)?.0),
        Payload::FixedPoint(a, s) => {
            let aff = build_aff(a)?;
            let twist = build_twist(&aff, s)?;
            Ok(fixed_subalgebra(&aff, &twist, ctx.window)
                .map_err(math)?
                .handle
                .presentation)
        }
    }
}

/// The graded handle of an algebra document; `None` after reporting failed conditions.
fn handle_of(
    doc: &InputDocument,
    ctx: &Ctx,
    out: &mut Output,
) -> Result<Option<GrlaHandle>, Failure> {
    match &doc.payload {
        Payload::Grrs(_) => unreachable!("rejected by kind"),
        Payload::LieAlg(a) => Ok(Some(build_algebra(a)?.handle().map_err(math)?)),
        Payload::Affinize(a) => Ok(Some(build_aff(a)?.handle(ctx.window).map_err(math)?)),
        Payload::FixedPoint(a, s) => {
            let aff = build_aff(a)?;
            Ok(fixed(&aff, s, ctx, out)?.map(|fp| fp.handle))
        }
    }
}

fn fmt_family(p: &GrrsPresentation, k: usize) -> String {
    let f = &p.families()[k];
    format!("{} + {}", fmt_vec(&f.base), f.support)
}

fn presentation_facts(p: &GrrsPresentation, sec: &mut Section) {
    sec.fact("ambient dimension", p.dim())
        .fact("null rank", p.null_rank())
        .fact("families", p.families().len());
    for k in 0..p.families().len() {
        let tag = if p.is_isotropic_class(k) {
            "isotropic"
        } else {
            "nonisotropic"
        };
        sec.fact(
            format!("family {}", k + 1),
            format!("{} ({})", fmt_family(p, k), tag),
        );
    }
}

fn grrs_command(cmd: Command, p: &GrrsPresentation, ctx: &Ctx, out: &mut Output) {
    let mut sys = Section::info("root system");
    presentation_facts(p, &mut sys);
    match cmd {
        Command::CheckGrrs => {
            let rep = p.check_axioms(&ctx.opts);
            sys.fact("form positive semidefinite", yes_no(rep.form_psd))
                .fact("nullity", p.nullity());
            out.sections.push(sys);
            let mut ax = Section::new("axioms");
            for c in &rep.checks {
                ax.check(c.name, c.pass, c.detail.clone());
            }
            out.sections.push(ax);
        }
        Command::DecomposeGrrs => {
            out.sections.push(sys);
            decompose_grrs(p, ctx, out);
        }
        Command::Isolated => {
            out.sections.push(sys);
            isolated(p, ctx, out);
        }
        _ => unreachable!("root system commands only"),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn decompose_grrs(p: &GrrsPresentation, ctx: &Ctx, out: &mut Output) {
    let d = match p.decompose(&ctx.opts) {
        Ok(d) => d,
        Err(e) => {
            out.error = Some(format!("decomposition failed: {}", e));
            return;
        }
    };
    let mut sec = Section::new("decomposition");
    sec.fact("components", d.components.len());
    let types: Vec<String> = d
        .components
        .iter()
        .map(|c| c.root_type.to_string())
        .collect();
    sec.fact("types", types.join(", "))
        .fact("nullity", d.nullity);
    for (i, c) in d.components.iter().enumerate() {
        let k = i + 1;
        sec.fact(format!("component {} type", k), c.root_type);
        sec.fact(format!("component {} scale", k), &c.scale);
        sec.fact(
            format!("component {} isotropic support", k),
            &c.null_support,
        );
        sec.fact(
            format!("component {} isotropic roots in its span", k),
            &c.closure_null,
        );
        let closure_iso = c
            .closed
            .isolated_roots()
            .map(|x| x.to_string())
            .unwrap_or_else(|e| e.to_string());
        let singular = c
            .closed
            .isolated_roots()
            .map(|x| !x.is_empty())
            .unwrap_or(false);
        sec.fact(
            format!("component {} closure singular", k),
            yes_no(singular),
        );
        sec.fact(
            format!("component {} closure isolated roots", k),
            closure_iso,
        );
    }
    sec.fact("isolated roots", &d.isolated);
    sec.fact("isolated roots outside all closures", &d.outside_closures);
    sec.fact("non-singular", yes_no(d.isolated.is_empty()));
    out.sections.push(sec);
}

fn isolated(p: &GrrsPresentation, ctx: &Ctx, out: &mut Output) {
    let mut sec = Section::new("isolated roots");
    match p.isolated_roots() {
        Ok(iso) => {
            sec.fact("set", &iso);
            let pts =
                iso.enumerate_window(&vec![(-ctx.opts.window, ctx.opts.window); p.null_rank()]);
            sec.fact("points in window", pts.len());
            let shown: Vec<String> = pts.iter().map(|x| fmt_int_vec(x)).collect();
            sec.fact(
                "window points",
                if shown.is_empty() {
                    "none".to_string()
                } else {
                    shown.join(" ")
                },
            );
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out.sections.push(sec);
}

/// Splits a GR report into axiom checks and extended properties.
fn gr_sections(r: &Report, out: &mut Output) {
    let mut axioms = Section::new("GRLA axioms");
    let mut extra = Section::info("extended properties");
    for c in &r.checks {
        let target = if c.name.starts_with("GR") && !c.name.starts_with("GR6") {
            &mut axioms
        } else {
            &mut extra
        };
        target.check(c.name, c.pass, c.detail.clone());
    }
    out.sections.push(axioms);
    if !extra.checks.is_empty() {
        out.sections.push(extra);
    }
}

fn degree_dims(w: &GradedWindow) -> String {
    let mut by: BTreeMap<i64, usize> = BTreeMap::new();
    for i in 0..w.dim() {
        *by.entry(w.grade(i)).or_insert(0) += 1;
    }
    by.iter()
        .map(|(k, n)| format!("{}:{}", k, n))
        .collect::<Vec<_>>()
        .join(" ")
}

fn window_facts(w: &GradedWindow, sec: &mut Section) {
    sec.fact("dimension", w.dim())
        .fact("Cartan rank", w.cartan_rank());
    if let Some(r) = w.radius() {
        sec.fact("radius", r)
            .fact("dimensions by degree", degree_dims(w));
    }
}

fn check_lie(doc: &InputDocument, ctx: &Ctx, out: &mut Output) -> Result<(), Failure> {
    match &doc.payload {
        Payload::LieAlg(a) => {
            let l = build_algebra(a)?;
            let mut sec = Section::info("algebra");
            sec.fact("dimension", l.dim())
                .fact("Cartan rank", l.cartan().len());
            if let Ok(rd) = l.root_decomposition() {
                let roots: Vec<String> = rd.roots.iter().map(|r| fmt_vec(r)).collect();
                sec.fact("weights", roots.join(" "));
            }
            out.sections.push(sec);
            gr_sections(&l.check_gr(&ctx.opts), out);
        }
        Payload::Affinize(a) => {
            let aff = build_aff(a)?;
            let hd = aff.handle(ctx.window).map_err(math)?;
            let mut sec = Section::info("window");
            window_facts(&hd.window, &mut sec);
            out.sections.push(sec);
            window_gr(&hd, out);
        }
        Payload::FixedPoint(a, s) => {
            let aff = build_aff(a)?;
            if let Some(fp) = fixed(&aff, s, ctx, out)? {
                let mut sec = Section::info("fixed points");
                window_facts(&fp.handle.window, &mut sec);
                out.sections.push(sec);
                window_gr(&fp.handle, out);
            }
        }
        Payload::Grrs(_) => unreachable!("rejected by kind"),
    }
    Ok(())
}

fn window_gr(hd: &GrlaHandle, out: &mut Output) {
    let mut r = window_gr_checks(hd);
    let tame = window_tameness(&hd.window);
    r.push(
        "tame",
        tame.is_none(),
        tame.map_or("the core contains its centralizer".to_string(), |w| {
            format!("{} centralizes the core but lies outside it", w)
        }),
    );
    gr_sections(&r, out);
}

fn decompose_lie(hd: &GrlaHandle, ctx: &Ctx, out: &mut Output) {
    let d = match intrinsic_decomposition(hd, &ctx.opts) {
        Ok(d) => d,
        Err(e) => {
            out.error = Some(format!("decomposition failed: {}", e));
            return;
        }
    };
    let w = &hd.window;
    let n = w.dim();
    let mut sec = Section::new("decomposition");
    sec.fact("pieces", d.k());
    for (i, p) in d.pieces.iter().enumerate() {
        let k = i + 1;
        sec.fact(format!("piece {} type", k), p.root_type);
        sec.fact(format!("piece {} dimension", k), p.basis.len());
        sec.fact(format!("piece {} core dimension", k), p.core.len());
        sec.fact(
            format!("piece {} Cartan split", k),
            format!(
                "finite {}, null {}, dual {}",
                p.cartan_roots.len(),
                p.cartan_null.len(),
                p.dim_derivations
            ),
        );
    }
    let spaces: Vec<Subspace> = d
        .pieces
        .iter()
        .map(|p| Subspace::spanned_by(n, &p.basis))
        .collect();
    for i in 0..spaces.len() {
        for j in i + 1..spaces.len() {
            let meet = spaces[i].intersect(&spaces[j]);
            let els: Vec<String> = meet.basis().iter().map(|v| w.fmt_element(v)).collect();
            sec.fact(
                format!("piece {} meets piece {}", i + 1, j + 1),
                if els.is_empty() {
                    "0".to_string()
                } else {
                    format!("span{{{}}}", els.join(", "))
                },
            );
        }
    }
    sec.fact("dim W", d.w.len())
        .fact("dim I", d.extra_space.len());
    let fmt_all = |vs: &[Vector]| -> String {
        if vs.is_empty() {
            "0".into()
        } else {
            vs.iter()
                .map(|v| w.fmt_element(v))
                .collect::<Vec<_>>()
                .join(", ")
        }
    };
    sec.fact("W", fmt_all(&d.w))
        .fact("I", fmt_all(&d.extra_space));
    sec.fact("root components", d.roots.components.len())
        .fact("nullity", d.roots.nullity);
    sec.checks(&d.checks);
    out.sections.push(sec);
}

fn affinize(doc: &InputDocument, ctx: &Ctx, out: &mut Output) -> Result<(), Failure> {
    let a = doc.algebra().expect("algebra kinds");
    let aff = build_aff(a)?;
    let hd = aff.handle(ctx.window).map_err(math)?;
    let w = &hd.window;
    let mut sec = Section::new("affinization window");
    sec.fact("base dimension", aff.base().dim());
    window_facts(w, &mut sec);
    sec.check(
        "antisymmetry",
        w.check_antisymmetry().is_none(),
        w.check_antisymmetry().unwrap_or_else(|| "all pairs".into()),
    );
    let jac = w.check_jacobi();
    sec.check(
        "Jacobi",
        jac.is_none(),
        jac.unwrap_or_else(|| "all in-window triples".into()),
    );
    let inv = w.check_invariance();
    sec.check(
        "form invariant",
        inv.is_none(),
        inv.unwrap_or_else(|| "all in-window triples".into()),
    );
    let gr = w.check_grading();
    sec.check(
        "grading",
        gr.is_none(),
        gr.unwrap_or_else(|| "brackets add weights".into()),
    );
    out.sections.push(sec);

    let (p, _) = aff.root_system().map_err(math)?;
    let rep = p.check_axioms(&ctx.opts);
    let mut rs = Section::new("root system");
    presentation_facts(&p, &mut rs);
    rs.fact("nullity", p.nullity());
    let mut ears = Section::info("root system properties");
    for c in &rep.checks {
        let target = if c.name == "R6" || c.name == "R7" {
            &mut ears
        } else {
            &mut rs
        };
        target.check(c.name, c.pass, c.detail.clone());
    }
    out.sections.push(rs);
    out.sections.push(ears);
    window_gr(&hd, out);
    Ok(())
}

fn fixed_points(doc: &InputDocument, ctx: &Ctx, out: &mut Output) -> Result<(), Failure> {
    let Payload::FixedPoint(a, s) = &doc.payload else {
        unreachable!("rejected by kind")
    };
    let aff = build_aff(a)?;
    let Some(fp) = fixed(&aff, s, ctx, out)? else {
        return Ok(());
    };
    let p = &fp.handle.presentation;
    let mut sec = Section::info("fixed points");
    window_facts(&fp.handle.window, &mut sec);
    out.sections.push(sec);
    let mut rs = Section::info("root presentation");
    presentation_facts(p, &mut rs);
    let noniso = p.nonisotropic_classes().len();
    rs.fact("nonisotropic families", noniso)
        .fact("nullity", p.nullity());
    out.sections.push(rs);
    let mut r = fp.gr.clone();
    r.push(
        "nonisotropic roots",
        noniso > 0,
        format!("{} nonisotropic families", noniso),
    );
    let mut gr = Section::new("GRLA axioms");
    gr.checks(&r);
    out.sections.push(gr);
    Ok(())
}

fn lie_torus(hd: &GrlaHandle, ctx: &Ctx, out: &mut Output) -> Result<(), Failure> {
    let pipe = match core_mod_center_pipeline(hd, &ctx.opts) {
        Ok(p) => p,
        Err(TorusError::WindowTooSmall(m)) => {
            return Err(Failure::Input(InputRejected(format!(
                "window too small ({}); raise --window",
                m
            ))))
        }
        Err(e) => return Err(math(e)),
    };
    let mut sec = Section::new("core modulo center");
    sec.fact("core dimension", pipe.core.dim());
    let center: Vec<String> = pipe
        .center
        .iter()
        .map(|v| pipe.core.fmt_element(v))
        .collect();
    sec.fact(
        "center",
        if center.is_empty() {
            "0".to_string()
        } else {
            format!("span{{{}}}", center.join(", "))
        },
    );
    sec.fact("quotient dimension", pipe.quotient.dim())
        .fact("components", pipe.components.len());
    if pipe.quotient.radius().is_some() {
        sec.fact("quotient dimensions by degree", degree_dims(&pipe.quotient));
    }
    sec.checks(&pipe.checks);
    out.sections.push(sec);
    for (i, c) in pipe.components.iter().enumerate() {
        let mut s = Section::new(format!("Lie torus {}", i + 1));
        s.fact("type", &c.report.type_label);
        for line in c.grading.to_string().lines() {
            if let Some((k, v)) = line.split_once(": ") {
                s.fact(k, v);
            }
        }
        s.fact("core dimension", c.core.dim());
        let center: Vec<String> = c.center.iter().map(|v| c.core.fmt_element(v)).collect();
        s.fact(
            "center",
            if center.is_empty() {
                "0".to_string()
            } else {
                format!("span{{{}}}", center.join(", "))
            },
        );
        s.fact("quotient dimension", c.quotient.dim());
        s.checks(&c.report.checks);
        out.sections.push(s);
    }
    Ok(())
}
