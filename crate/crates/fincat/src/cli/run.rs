//! Executes validated run statements against the environment and collects
//! check results. Engine-level failures become `fail` entries with their
//! witnesses; they never abort the rest of the script.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cli::ast::RunStmt;
use crate::cli::elab::{Entity, EntityKind, Env};
use crate::cli::pretty::run_header;
use crate::cli::report::{Check, Section};
use crate::cli::CliOptions;
use crate::corpus;
use crate::fincore::{op_cat, AdjunctionWitness, FinCat, FinFunctor};
use crate::ids::{ElemId, ObjId};
use crate::finset::{FinSet, Quotient, SetMap};
use crate::isbell;
use crate::kan;
use crate::presheaf::{
    self, density_check, hom_set, nat_hom, yoneda, yoneda_fully_faithful, yoneda_lemma_check,
    NatFamily, SetFunctor,
};
use crate::prof::{
    companion, companion_conjoint_adjunction, compose_coend, conjoint, sample_profunctor,
    Profunctor,
};
use crate::relmonad::{
    check_assoc_law, check_unit_laws, constant_extras, kleisli_compose, lax_idempotency_witness,
    main_theorem_roundtrip, nested_samples, upper_universe, KleisliCell, PresheafUniverse,
};
use crate::skew;

pub fn execute(run: &RunStmt, env: &Env, opts: &CliOptions) -> Section {
    let checks = match run.command.as_str() {
        "validate" => cmd_validate(run, env),
        "hom" => cmd_hom(run, env),
        "yoneda" => cmd_yoneda(run, env),
        "nat-hom" => cmd_nat_hom(run, env),
        "lan" => cmd_lan(run, env),
        "ran" => cmd_ran(run, env),
        "nerve" => cmd_nerve(run, env),
        "coend" => cmd_coend(run, env),
        "end" => cmd_end(run, env),
        "wcolim" => cmd_wcolim(run, env),
        "compose-prof" => cmd_compose_prof(run, env),
        "kleisli" => cmd_kleisli(run, env),
        "companion" => cmd_companion(run, env, false),
        "conjoint" => cmd_companion(run, env, true),
        "isbell-o" => cmd_isbell_o(run, env),
        "isbell-spec" => cmd_isbell_spec(run, env),
        "aft" => cmd_aft(run, env),
        "suite" => cmd_suite(run, env, opts),
        other => vec![Check::fail("dispatch", format!("unknown command `{other}`"))],
    };
    Section {
        command: run_header(run),
        checks,
    }
}

// ---------------------------------------------------------------------------
// rendering helpers

fn q(name: &str) -> String {
    crate::cli::token::print_name(name)
}

fn dump_finset(s: &FinSet) -> String {
    if s.is_empty() {
        "{ }".to_string()
    } else {
        format!(
            "{{ {} }}",
            s.elements()
                .iter()
                .map(|e| q(e.as_str()))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

fn dump_setmap(m: &SetMap) -> String {
    if m.dom().is_empty() {
        return "(empty map)".to_string();
    }
    m.dom()
        .elements()
        .iter()
        .map(|e| format!("{} -> {}", q(e.as_str()), q(m.apply(e).as_str())))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders a set-valued functor against the category its user knows:
/// `base` when covariant, `op base` (with base-named arrows) when the
/// functor is a presheaf on `base`.
fn dump_set_functor(base: &FinCat, f: &SetFunctor, contravariant: bool) -> Vec<String> {
    let mut out = Vec::new();
    for o in base.objects() {
        out.push(format!("value {} = {}", q(o.as_str()), dump_finset(f.on_obj(o))));
    }
    for a in base.arrows() {
        if base.is_identity(&a.id) {
            continue;
        }
        let direction = if contravariant {
            format!("{} <- {}", q(a.src.as_str()), q(a.tgt.as_str()))
        } else {
            format!("{} -> {}", q(a.src.as_str()), q(a.tgt.as_str()))
        };
        out.push(format!(
            "action {} ({direction}): {}",
            q(a.id.as_str()),
            dump_setmap(f.on_arr(&a.id))
        ));
    }
    out
}

fn dump_profunctor(p: &Profunctor) -> Vec<String> {
    let mut out = Vec::new();
    for a in p.src.objects() {
        for b in p.dst.objects() {
            out.push(format!(
                "value ({}, {}) = {}",
                q(a.as_str()),
                q(b.as_str()),
                dump_finset(p.at(a, b))
            ));
        }
    }
    let body = &p.body;
    for f in p.src.arrows() {
        if p.src.is_identity(&f.id) {
            continue;
        }
        for b in p.dst.objects() {
            let key = crate::ids::ArrId::new(crate::ids::pair(
                f.id.as_str(),
                p.dst.identity_of(b).as_str(),
            ));
            out.push(format!(
                "action ({}, {}): {}",
                q(f.id.as_str()),
                q(p.dst.identity_of(b).as_str()),
                dump_setmap(body.on_arr(&key))
            ));
        }
    }
    for g in p.dst.arrows() {
        if p.dst.is_identity(&g.id) {
            continue;
        }
        for a in p.src.objects() {
            let key = crate::ids::ArrId::new(crate::ids::pair(
                p.src.identity_of(a).as_str(),
                g.id.as_str(),
            ));
            out.push(format!(
                "action ({}, {}): {}",
                q(p.src.identity_of(a).as_str()),
                q(g.id.as_str()),
                dump_setmap(body.on_arr(&key))
            ));
        }
    }
    out
}

fn fmt_family(fam: &NatFamily) -> String {
    fam.dom()
        .shape()
        .objects()
        .iter()
        .map(|o| format!("at {}: {}", q(o.as_str()), dump_setmap(fam.component(o))))
        .collect::<Vec<_>>()
        .join("; ")
}

fn dump_quotient(quot: &Quotient) -> Vec<String> {
    let mut classes: std::collections::BTreeMap<ElemId, Vec<ElemId>> =
        std::collections::BTreeMap::new();
    for e in quot.carrier().elements() {
        classes
            .entry(quot.rep(e).clone())
            .or_default()
            .push(e.clone());
    }
    classes
        .into_iter()
        .map(|(rep, members)| {
            format!(
                "class {} = {{ {} }}",
                q(rep.as_str()),
                members
                    .iter()
                    .map(|m| q(m.as_str()))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect()
}

fn engine_fail(name: &str, err: impl std::fmt::Display) -> Vec<Check> {
    vec![Check::fail(name, err.to_string())]
}

// ---------------------------------------------------------------------------
// plain commands

fn cmd_validate(run: &RunStmt, env: &Env) -> Vec<Check> {
    let name = run.args[0].as_str();
    let (kind, entity) = env.lookup(name).expect("validated at elaboration");
    let check = Check::pass(format!("validate ({})", kind.label()));
    let details: Vec<String> = match entity {
        Entity::Cat(c) => {
            let mut lines = vec![
                format!(
                    "objects ({}): {}",
                    c.objects().len(),
                    c.objects()
                        .iter()
                        .map(|o| q(o.as_str()))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                format!(
                    "arrows ({}): {}",
                    c.arrows().len(),
                    c.arrows()
                        .iter()
                        .map(|a| q(a.id.as_str()))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ];
            if *kind == EntityKind::Lattice {
                lines.push("all binary joins and a bottom element exist".to_string());
            }
            lines
        }
        Entity::Functor(f) => {
            let mut lines = Vec::new();
            for o in f.dom().objects() {
                lines.push(format!("object {} => {}", q(o.as_str()), q(f.on_obj(o).as_str())));
            }
            for a in f.dom().arrows() {
                lines.push(format!(
                    "arrow {} => {}",
                    q(a.id.as_str()),
                    q(f.on_arr(&a.id).as_str())
                ));
            }
            lines
        }
        Entity::Presheaf {
            base,
            on_op_base,
            value,
        } => {
            let written = if *on_op_base { op_cat(base) } else { base.clone() };
            dump_set_functor(&written, value, true)
        }
        Entity::Prof(p) => dump_profunctor(p),
        Entity::Adjunction(w) => dump_adjunction(w),
    };
    vec![check.details(details)]
}

fn dump_adjunction(w: &AdjunctionWitness) -> Vec<String> {
    let mut lines = Vec::new();
    for (o, a) in w.unit.components() {
        lines.push(format!("unit at {}: {}", q(o.as_str()), q(a.as_str())));
    }
    for (o, a) in w.counit.components() {
        lines.push(format!("counit at {}: {}", q(o.as_str()), q(a.as_str())));
    }
    lines.push("both triangle identities verified".to_string());
    lines
}

fn cmd_hom(run: &RunStmt, env: &Env) -> Vec<Check> {
    let c = env.category(&run.args[0]).expect("validated");
    let x = ObjId::new(run.args[1].as_str());
    let y = ObjId::new(run.args[2].as_str());
    for o in [&x, &y] {
        if !c.has_object(o) {
            return engine_fail("hom-set", format!("no object `{o}` in `{}`", run.args[0].as_str()));
        }
    }
    vec![Check::pass("hom-set").detail(format!(
        "hom({}, {}) = {}",
        q(x.as_str()),
        q(y.as_str()),
        dump_finset(&hom_set(c, &x, &y))
    ))]
}

fn cmd_yoneda(run: &RunStmt, env: &Env) -> Vec<Check> {
    let c = env.category(&run.args[0]).expect("validated");
    let a = ObjId::new(run.args[1].as_str());
    if !c.has_object(&a) {
        return engine_fail(
            "representable",
            format!("no object `{a}` in `{}`", run.args[0].as_str()),
        );
    }
    let ya = yoneda(c, &a);
    vec![Check::pass("representable").details(dump_set_functor(c, &ya, true))]
}

fn cmd_nat_hom(run: &RunStmt, env: &Env) -> Vec<Check> {
    let (_, _, p) = env.presheaf(&run.args[0]).expect("validated");
    let (_, _, r) = env.presheaf(&run.args[1]).expect("validated");
    if p.shape() != r.shape() {
        return engine_fail(
            "natural-transformations",
            "the presheaves live over different bases",
        );
    }
    let families = nat_hom(p, r);
    let mut check =
        Check::pass("natural-transformations").detail(format!("count: {}", families.len()));
    for (i, fam) in families.iter().enumerate() {
        check = check.detail(format!("family {i}: {}", fmt_family(fam)));
    }
    vec![check]
}

fn cmd_lan(run: &RunStmt, env: &Env) -> Vec<Check> {
    let f = env.functor(&run.args[0]).expect("validated");
    let (base, on_op, p) = env.presheaf(&run.args[1]).expect("validated");
    if on_op || base != f.dom() {
        return engine_fail(
            "left-extension",
            format!(
                "`{}` must be a presheaf on the domain of `{}`",
                run.args[1].as_str(),
                run.args[0].as_str()
            ),
        );
    }
    let ext = presheaf::extend(f, p);
    let unit = presheaf::ext_unit(f, p);
    vec![
        Check::pass("left-extension").details(dump_set_functor(f.cod(), &ext, true)),
        Check::pass("extension-unit").detail(fmt_family(&unit)),
    ]
}

fn cmd_ran(run: &RunStmt, env: &Env) -> Vec<Check> {
    let f = env.functor(&run.args[0]).expect("validated");
    let (base, on_op, p) = env.presheaf(&run.args[1]).expect("validated");
    if on_op || base != f.dom() {
        return engine_fail(
            "right-extension",
            format!(
                "`{}` must be a presheaf on the domain of `{}`",
                run.args[1].as_str(),
                run.args[0].as_str()
            ),
        );
    }
    let result = kan::ran_set(&f.op(), p);
    vec![
        Check::pass("right-extension").details(dump_set_functor(f.cod(), &result.extension, true)),
        Check::pass("extension-counit").detail(fmt_family(&result.counit)),
    ]
}

fn cmd_nerve(run: &RunStmt, env: &Env) -> Vec<Check> {
    let f = env.functor(&run.args[0]).expect("validated");
    let b = ObjId::new(run.args[1].as_str());
    if !f.cod().has_object(&b) {
        return engine_fail(
            "nerve",
            format!("no object `{b}` in the codomain of `{}`", run.args[0].as_str()),
        );
    }
    let n = kan::nerve_at(f, &b);
    vec![Check::pass("nerve").details(dump_set_functor(f.dom(), &n, true))]
}

fn endo_prof<'e>(env: &'e Env, run: &RunStmt, what: &str) -> Result<&'e Profunctor, Vec<Check>> {
    let p = env.profunctor(&run.args[0]).expect("validated");
    if p.src != p.dst {
        return Err(engine_fail(
            what,
            "the profunctor must start and end at the same category",
        ));
    }
    Ok(p)
}

fn cmd_coend(run: &RunStmt, env: &Env) -> Vec<Check> {
    let p = match endo_prof(env, run, "coend") {
        Ok(p) => p,
        Err(checks) => return checks,
    };
    let result = kan::coend(&p.src, &p.body);
    let mut check = Check::pass("coend").details(dump_quotient(&result.quotient));
    for (o, inj) in &result.injections {
        check = check.detail(format!("injection at {}: {}", q(o.as_str()), dump_setmap(inj)));
    }
    vec![check]
}

fn cmd_end(run: &RunStmt, env: &Env) -> Vec<Check> {
    let p = match endo_prof(env, run, "end") {
        Ok(p) => p,
        Err(checks) => return checks,
    };
    let result = kan::end(&p.src, &p.body);
    let mut check = Check::pass("end").detail(format!(
        "carrier = {}",
        dump_finset(&result.carrier)
    ));
    for (o, proj) in &result.projections {
        check = check.detail(format!(
            "projection at {}: {}",
            q(o.as_str()),
            dump_setmap(proj)
        ));
    }
    vec![check]
}

fn cmd_wcolim(run: &RunStmt, env: &Env) -> Vec<Check> {
    let (w_base, w_op, w) = env.presheaf(&run.args[0]).expect("validated");
    let (d_base, d_op, d) = env.presheaf(&run.args[1]).expect("validated");
    if w_op {
        return engine_fail("weighted-colimit", "the weight must be a presheaf on the base");
    }
    if !d_op {
        return engine_fail(
            "weighted-colimit",
            "the diagram must be declared on the op base (a covariant functor)",
        );
    }
    if w_base != d_base {
        return engine_fail("weighted-colimit", "weight and diagram live over different bases");
    }
    let result = kan::weighted_colim(w_base, w, d);
    let mut check = Check::pass("weighted-colimit").details(dump_quotient(&result.quotient));
    for (o, inj) in &result.injections {
        check = check.detail(format!("injection at {}: {}", q(o.as_str()), dump_setmap(inj)));
    }
    vec![check]
}

fn cmd_compose_prof(run: &RunStmt, env: &Env) -> Vec<Check> {
    let second = env.profunctor(&run.args[0]).expect("validated");
    let first = env.profunctor(&run.args[1]).expect("validated");
    if first.dst != second.src {
        return engine_fail(
            "profunctor-composite",
            format!(
                "`{}` ends where `{}` does not start",
                run.args[1].as_str(),
                run.args[0].as_str()
            ),
        );
    }
    match compose_coend(second, first) {
        Ok(composite) => {
            vec![Check::pass("profunctor-composite").details(dump_profunctor(&composite))]
        }
        Err(e) => engine_fail("profunctor-composite", e),
    }
}

fn cell_of(entity: &Entity) -> Result<KleisliCell, String> {
    match entity {
        Entity::Functor(f) => Ok(KleisliCell::from_functor(f)),
        Entity::Prof(p) => KleisliCell::new(p.dst.clone(), p.src.clone(), p.clone())
            .map_err(|e| e.to_string()),
        _ => Err("kleisli arguments must be profunctors or functors".to_string()),
    }
}

fn cmd_kleisli(run: &RunStmt, env: &Env) -> Vec<Check> {
    let (_, g_entity) = env.lookup(run.args[0].as_str()).expect("validated");
    let (_, f_entity) = env.lookup(run.args[1].as_str()).expect("validated");
    let g_cell = match cell_of(g_entity) {
        Ok(c) => c,
        Err(e) => return engine_fail("kleisli-composite", e),
    };
    let f_cell = match cell_of(f_entity) {
        Ok(c) => c,
        Err(e) => return engine_fail("kleisli-composite", e),
    };
    if f_cell.dst != g_cell.src {
        return engine_fail(
            "kleisli-composite",
            format!(
                "`{}` lands in a category where `{}` does not start",
                run.args[1].as_str(),
                run.args[0].as_str()
            ),
        );
    }
    let composite = match kleisli_compose(&g_cell, &f_cell) {
        Ok(c) => c,
        Err(e) => return engine_fail("kleisli-composite", e),
    };
    let mut checks =
        vec![Check::pass("kleisli-composite").details(dump_profunctor(&composite.prof))];
    match compose_coend(&f_cell.prof, &g_cell.prof) {
        Ok(direct) => {
            if composite.prof.body == direct.body {
                checks.push(Check::pass("agrees-with-coend-composite"));
            } else {
                checks.push(Check::fail(
                    "agrees-with-coend-composite",
                    "the pointwise colimit and the coend composite differ",
                ));
            }
        }
        Err(e) => checks.push(Check::fail("agrees-with-coend-composite", e.to_string())),
    }
    checks
}

fn cmd_companion(run: &RunStmt, env: &Env, use_conjoint: bool) -> Vec<Check> {
    let f = env.functor(&run.args[0]).expect("validated");
    let (name, p) = if use_conjoint {
        ("conjoint", conjoint(f))
    } else {
        ("companion", companion(f))
    };
    let mut checks = vec![Check::pass(name).details(dump_profunctor(&p))];
    match companion_conjoint_adjunction(f) {
        Ok(_) => checks.push(Check::pass("companion-conjoint-triangles")),
        Err(e) => checks.push(Check::fail("companion-conjoint-triangles", e.to_string())),
    }
    checks
}

fn cmd_isbell_o(run: &RunStmt, env: &Env) -> Vec<Check> {
    let (base, on_op, p) = env.presheaf(&run.args[0]).expect("validated");
    if on_op {
        return engine_fail(
            "isbell-conjugate",
            "isbell-o needs a presheaf declared on a base category, not an op base",
        );
    }
    match isbell::isbell_o(base, p) {
        Ok(image) => {
            vec![Check::pass("isbell-conjugate")
                .details(dump_set_functor(base, &image.copresheaf, false))]
        }
        Err(e) => engine_fail("isbell-conjugate", e),
    }
}

fn cmd_isbell_spec(run: &RunStmt, env: &Env) -> Vec<Check> {
    let (base, on_op, g) = env.presheaf(&run.args[0]).expect("validated");
    if !on_op {
        return engine_fail(
            "isbell-spectrum",
            "isbell-spec needs a covariant functor: declare it on `op <base>`",
        );
    }
    match isbell::isbell_spec(base, g) {
        Ok(image) => {
            vec![Check::pass("isbell-spectrum")
                .details(dump_set_functor(base, &image.presheaf, true))]
        }
        Err(e) => engine_fail("isbell-spectrum", e),
    }
}

fn cmd_aft(run: &RunStmt, env: &Env) -> Vec<Check> {
    let f = env.functor(&run.args[0]).expect("validated");
    match kan::formal_aft(f) {
        Ok(kan::AftOutcome::Adjoint { right, witness }) => {
            let mut check = Check::pass("aft-verdict")
                .detail("the map preserves all joins; a right adjoint exists");
            for o in right.dom().objects() {
                check = check.detail(format!(
                    "right adjoint: {} => {}",
                    q(o.as_str()),
                    q(right.on_obj(o).as_str())
                ));
            }
            check = check.details(dump_adjunction(&witness));
            vec![check]
        }
        Ok(kan::AftOutcome::JoinNotPreserved { pair }) => {
            let reason = match pair {
                None => "the bottom element is not preserved".to_string(),
                Some((a, b)) => format!(
                    "the join of {} and {} is not preserved",
                    q(a.as_str()),
                    q(b.as_str())
                ),
            };
            vec![Check::pass("aft-verdict").detail(format!("no right adjoint: {reason}"))]
        }
        Err(e) => engine_fail("aft-verdict", e),
    }
}

// ---------------------------------------------------------------------------
// suites

/// Bases a suite runs over: the named arguments, or a labelled built-in
/// battery when no arguments are given.
fn suite_bases(run: &RunStmt, env: &Env, defaults: &[(&str, FinCat)]) -> Vec<(String, FinCat)> {
    if run.args.len() > 1 {
        run.args[1..]
            .iter()
            .map(|name| {
                (
                    name.text.clone(),
                    env.category(name).expect("validated").clone(),
                )
            })
            .collect()
    } else {
        defaults
            .iter()
            .map(|(label, c)| (label.to_string(), c.clone()))
            .collect()
    }
}

fn builtin_equipment() -> Vec<(&'static str, FinCat)> {
    vec![
        ("point", corpus::terminal()),
        ("arrow", corpus::walking_arrow()),
        ("pair-of-points", corpus::discrete(2)),
        ("chain3", corpus::chain(3)),
    ]
}

/// Declared presheaves over `base` (covariant ones when `on_op` is set),
/// in declaration order.
fn declared_presheaves(env: &Env, base: &FinCat, on_op: bool) -> Vec<(String, SetFunctor)> {
    let mut out = Vec::new();
    for name in env.names() {
        if let Some((_, Entity::Presheaf {
            base: b,
            on_op_base,
            value,
        })) = env.lookup(name)
        {
            if b == base && *on_op_base == on_op {
                out.push((name.clone(), value.clone()));
            }
        }
    }
    out
}

fn suite_yoneda(run: &RunStmt, env: &Env) -> Vec<Check> {
    let bases = suite_bases(run, env, &builtin_equipment());
    let mut checks = Vec::new();
    for (label, c) in &bases {
        let mut pool = corpus::presheaf_pool(c);
        pool.extend(declared_presheaves(env, c, false));
        let mut sites = 0;
        let mut bijection = Check::pass(format!("yoneda-bijection ({label})"));
        'bij: for a in c.objects() {
            for (pname, p) in &pool {
                match yoneda_lemma_check(c, a, p) {
                    Ok(table) => sites += table.len() + 1,
                    Err(e) => {
                        bijection = Check::fail(
                            format!("yoneda-bijection ({label})"),
                            format!("at ({a}, {pname}): {e}"),
                        );
                        break 'bij;
                    }
                }
            }
        }
        if matches!(bijection.status, crate::cli::report::Status::Pass) {
            bijection = bijection.detail(format!(
                "{sites} evaluation points checked across {} presheaves",
                pool.len()
            ));
        }
        checks.push(bijection);

        let mut ff = Check::pass(format!("yoneda-fully-faithful ({label})"));
        let mut hom_pairs = 0;
        'ff: for a in c.objects() {
            for b in c.objects() {
                match yoneda_fully_faithful(c, a, b) {
                    Ok(()) => hom_pairs += 1,
                    Err(e) => {
                        ff = Check::fail(
                            format!("yoneda-fully-faithful ({label})"),
                            format!("at ({a}, {b}): {e}"),
                        );
                        break 'ff;
                    }
                }
            }
        }
        if matches!(ff.status, crate::cli::report::Status::Pass) {
            ff = ff.detail(format!("{hom_pairs} hom-sets compared with transformation sets"));
        }
        checks.push(ff);

        let mut density = Check::pass(format!("density ({label})"));
        let mut certificates = 0;
        for (pname, p) in &pool {
            match density_check(c, p) {
                Ok(cert) => certificates += cert.len(),
                Err(e) => {
                    density = Check::fail(
                        format!("density ({label})"),
                        format!("at {pname}: {e}"),
                    );
                    break;
                }
            }
        }
        if matches!(density.status, crate::cli::report::Status::Pass) {
            density = density.detail(format!(
                "{certificates} colimit presentations certified objectwise"
            ));
        }
        checks.push(density);
    }
    checks
}

fn suite_relmonad(run: &RunStmt, env: &Env) -> Vec<Check> {
    let defaults = vec![
        ("point", corpus::terminal()),
        ("arrow", corpus::walking_arrow()),
    ];
    let bases = suite_bases(run, env, &defaults);
    let mut checks = Vec::new();
    for (label, c) in &bases {
        let universe = match PresheafUniverse::new(c, &constant_extras(c)) {
            Ok(u) => u,
            Err(e) => {
                checks.push(Check::fail(format!("universe ({label})"), e.to_string()));
                continue;
            }
        };
        let samples = corpus::presheaf_pool(c);
        match check_unit_laws(&universe, &samples) {
            Ok(n) => checks.push(
                Check::pass(format!("unit-laws ({label})"))
                    .detail(format!("{n} unit triangles verified")),
            ),
            Err(e) => checks.push(Check::fail(format!("unit-laws ({label})"), e.to_string())),
        }
        let upper = match upper_universe(&universe) {
            Ok(u) => u,
            Err(e) => {
                checks.push(Check::fail(format!("associativity ({label})"), e.to_string()));
                continue;
            }
        };
        let nested = nested_samples(&universe);
        match check_assoc_law(&universe, &upper, &nested) {
            Ok(n) => checks.push(
                Check::pass(format!("associativity ({label})"))
                    .detail(format!("{n} towers collapsed both ways")),
            ),
            Err(e) => checks.push(Check::fail(format!("associativity ({label})"), e.to_string())),
        }
        match lax_idempotency_witness(&universe, &samples, &nested) {
            Ok(w) => checks.push(
                Check::pass(format!("lax-idempotency ({label})")).detail(format!(
                    "{} counits, {} units, {} zig-zags",
                    w.counits.len(),
                    w.units.len(),
                    w.zigzags
                )),
            ),
            Err(e) => {
                checks.push(Check::fail(format!("lax-idempotency ({label})"), e.to_string()))
            }
        }
    }
    checks
}

fn suite_skew(opts: &CliOptions) -> Vec<Check> {
    let probes: Vec<FinSet> = (0..=opts.probe_size)
        .map(|k| {
            FinSet::new((0..k).map(|i| ElemId::new(format!("p{i}"))).collect())
                .expect("distinct probe points")
        })
        .collect();
    let sizes: Vec<usize> = probes.iter().map(|p| p.len()).collect();
    let mut checks = Vec::new();
    for (cname, ctx) in skew::standard_contexts_with(&probes) {
        let samples = skew::sample_functors(&ctx);
        let pick = |i: usize| &samples[i % samples.len()].1;
        match skew::check_coherence(&ctx, pick(0), pick(1), pick(2), pick(3)) {
            Ok(report) => {
                let mut check = Check::pass(format!("coherence ({cname})"));
                for (axiom, count) in &report.sites {
                    check = check.detail(format!("{axiom}: {count} comparison sites"));
                }
                check = check.detail(format!(
                    "{} endofunctor probes at sizes {:?}",
                    report.probe_sites, sizes
                ));
                checks.push(check);
            }
            Err(e) => checks.push(Check::fail(format!("coherence ({cname})"), e.to_string())),
        }
        match skew::normality_report(&ctx) {
            Ok(n) => {
                let agrees = n.rho_matches_fully_faithful && n.lambda_matches_dense;
                let mut check = if agrees {
                    Check::pass(format!("normality ({cname})"))
                } else {
                    Check::fail(
                        format!("normality ({cname})"),
                        n.rho_witness
                            .or(n.lambda_witness)
                            .unwrap_or_else(|| "semantic and syntactic verdicts differ".into()),
                    )
                };
                check = check
                    .detail(format!(
                        "right unitor invertible: {} (fully faithful root: {})",
                        n.rho_invertible, n.fully_faithful
                    ))
                    .detail(format!(
                        "left unitor invertible: {} (dense root: {})",
                        n.lambda_invertible, n.dense
                    ))
                    .detail(format!("associator invertible: {}", n.gamma_invertible));
                checks.push(check);
            }
            Err(e) => checks.push(Check::fail(format!("normality ({cname})"), e.to_string())),
        }
    }
    checks
}

fn suite_isbell(run: &RunStmt, env: &Env) -> Vec<Check> {
    let defaults = vec![("arrow", corpus::walking_arrow())];
    let bases = suite_bases(run, env, &defaults);
    let mut checks = Vec::new();
    for (label, c) in &bases {
        let mut presheaves = corpus::presheaf_pool(c);
        presheaves.extend(declared_presheaves(env, c, false));
        let mut copresheaves = corpus::copresheaf_pool(c);
        copresheaves.extend(declared_presheaves(env, c, true));

        let mut adjunction = Check::pass(format!("dual-adjunction ({label})"));
        let mut pairs = 0;
        'adj: for (fname, f) in &presheaves {
            for (gname, g) in &copresheaves {
                match isbell::isbell_adjunction_check(c, f, g) {
                    Ok(b) => pairs += b.pairs.len() + 1,
                    Err(e) => {
                        adjunction = Check::fail(
                            format!("dual-adjunction ({label})"),
                            format!("at ({fname}, {gname}): {e}"),
                        );
                        break 'adj;
                    }
                }
            }
        }
        if matches!(adjunction.status, crate::cli::report::Status::Pass) {
            adjunction = adjunction.detail(format!(
                "{pairs} mate bijection points over {} presheaf/copresheaf pairs",
                presheaves.len() * copresheaves.len()
            ));
        }
        checks.push(adjunction);

        let mut self_dual = Check::pass(format!("representables-self-dual ({label})"));
        for a in c.objects() {
            match isbell::self_duality_check(c, &yoneda(c, a)) {
                Ok(report) if report.is_self_dual => {}
                Ok(_) => {
                    self_dual = Check::fail(
                        format!("representables-self-dual ({label})"),
                        format!("the representable at `{a}` is not fixed by the duality"),
                    );
                    break;
                }
                Err(e) => {
                    self_dual = Check::fail(
                        format!("representables-self-dual ({label})"),
                        format!("at `{a}`: {e}"),
                    );
                    break;
                }
            }
        }
        if matches!(self_dual.status, crate::cli::report::Status::Pass) {
            self_dual = self_dual.detail(format!(
                "{} representables fixed up to isomorphism",
                c.objects().len()
            ));
        }
        checks.push(self_dual);

        let mut triangles = Check::pass(format!("duality-triangles ({label})"));
        let mut triangle_count = 0;
        'tri: for (fname, f) in &presheaves {
            for (gname, g) in &copresheaves {
                match isbell::isbell_triangle_check(c, f, g) {
                    Ok(t) => {
                        if !(t.unit_at_spectrum_is_iso && t.counit_at_conjugate_is_iso) {
                            triangles = Check::fail(
                                format!("duality-triangles ({label})"),
                                format!("idempotency fails at ({fname}, {gname})"),
                            );
                            break 'tri;
                        }
                        triangle_count += 2;
                    }
                    Err(e) => {
                        triangles = Check::fail(
                            format!("duality-triangles ({label})"),
                            format!("at ({fname}, {gname}): {e}"),
                        );
                        break 'tri;
                    }
                }
            }
        }
        if matches!(triangles.status, crate::cli::report::Status::Pass) {
            triangles = triangles.detail(format!(
                "{triangle_count} triangle identities, all reflections invertible"
            ));
        }
        checks.push(triangles);
    }
    checks
}

/// Declared functors running between the given bases, in declaration
/// order, together with the identity of every base.
fn functors_between(env: &Env, bases: &[(String, FinCat)]) -> Vec<(String, FinFunctor)> {
    let mut out = Vec::new();
    for (label, c) in bases {
        out.push((format!("id_{label}"), FinFunctor::identity(c)));
    }
    for name in env.names() {
        if let Some((_, Entity::Functor(f))) = env.lookup(name) {
            let dom_in = bases.iter().any(|(_, c)| c == f.dom());
            let cod_in = bases.iter().any(|(_, c)| c == f.cod());
            if dom_in && cod_in {
                out.push((name.clone(), f.clone()));
            }
        }
    }
    out
}

fn suite_main_theorem(run: &RunStmt, env: &Env, opts: &CliOptions) -> Vec<Check> {
    let bases = suite_bases(run, env, &builtin_equipment());
    let functors = if run.args.len() > 1 {
        functors_between(env, &bases)
    } else {
        corpus::functor_corpus()
    };
    let base_cats: Vec<FinCat> = bases.iter().map(|(_, c)| c.clone()).collect();
    let mut checks = Vec::new();
    match main_theorem_roundtrip(&base_cats, &functors) {
        Ok(report) => checks.push(
            Check::pass("main-theorem-roundtrip")
                .detail(format!(
                    "{} companion/conjoint adjunctions certified",
                    report.adjunction_certificates
                ))
                .detail(format!(
                    "{} nerves presented as extensions",
                    report.nerve_certificates
                ))
                .detail(format!(
                    "{} relative-monad law certificates",
                    report.law_certificates
                )),
        ),
        Err(e) => checks.push(Check::fail("main-theorem-roundtrip", e.to_string())),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut agreements = 0;
    let mut agreement = Check::pass("kleisli-coend-agreement");
    'sample: for (_, c) in bases.iter().take(2) {
        for _ in 0..3 {
            let f = KleisliCell::new(c.clone(), c.clone(), sample_profunctor(c, c, &mut rng))
                .expect("sampled profunctors have the kleisli orientation");
            let g = KleisliCell::new(c.clone(), c.clone(), sample_profunctor(c, c, &mut rng))
                .expect("sampled profunctors have the kleisli orientation");
            let via_cells = match kleisli_compose(&g, &f) {
                Ok(k) => k,
                Err(e) => {
                    agreement = Check::fail("kleisli-coend-agreement", e.to_string());
                    break 'sample;
                }
            };
            let via_coend = match compose_coend(&f.prof, &g.prof) {
                Ok(p) => p,
                Err(e) => {
                    agreement = Check::fail("kleisli-coend-agreement", e.to_string());
                    break 'sample;
                }
            };
            if via_cells.prof.body != via_coend.body {
                agreement = Check::fail(
                    "kleisli-coend-agreement",
                    "a sampled composite differs between the two routes",
                );
                break 'sample;
            }
            agreements += 1;
        }
    }
    if matches!(agreement.status, crate::cli::report::Status::Pass) {
        agreement = agreement.detail(format!(
            "{agreements} random composites agree literally (seed {})",
            opts.seed
        ));
    }
    checks.push(agreement);
    checks
}

fn cmd_suite(run: &RunStmt, env: &Env, opts: &CliOptions) -> Vec<Check> {
    match run.args[0].as_str() {
        "yoneda-axioms" => suite_yoneda(run, env),
        "relmonad-laws" => suite_relmonad(run, env),
        "skew-coherence" => suite_skew(opts),
        "isbell" => suite_isbell(run, env),
        "main-theorem" => suite_main_theorem(run, env, opts),
        other => vec![Check::fail("suite", format!("unknown suite `{other}`"))],
    }
}
