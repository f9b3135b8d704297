use std::fmt::Write as _;
use std::time::{Duration, Instant};

use ogs_core::basis::{
    rpn_basis, rpn_basis_with_alpha, sn_basis, weyl_basis, wreath_basis, Basis, DecompositionTable, Method, RpnVariant,
    WeylType,
};
use ogs_core::search::{alpha_scan, search_perfect_hilbertian, SearchLimits, SearchOutcome};
use ogs_core::stats::{
    coxeter_generators_a, coxeter_generators_b, coxeter_generators_d, fmaj_polynomial, hilbert_polynomial,
    poincare_polynomial, QPolynomial,
};
use ogs_core::verify::{self, SignedGroups, ThetaReading, VerificationReport};
use ogs_core::{
    bplus_basis, decompose, enumerate_group, validate_basis, ColoredPerm, ElementSet, Error, Execution, GroupSpec,
    Result,
};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::{Cli, Command, Family, Format, GroupArgs, MethodArg, Property, SeriesKind, ThetaArg};

pub struct Output {
    pub rendered: String,
    pub exit: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotABasis(_) | Error::Unreached { .. } | Error::Inconsistent(_) => 3,
        _ => 2,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let started = Instant::now();
    let (command, body, mut text, exit) = match &cli.command {
        Command::Basis { group } => cmd_basis(cli, group)?,
        Command::Decompose { element, group, method } => cmd_decompose(cli, group, element, *method, true)?,
        Command::Fmaj { element, group } => cmd_decompose(cli, group, element, MethodArg::Table, false)?,
        Command::Series { kind, group } => cmd_series(cli, group, *kind)?,
        Command::Verify { property, group, theta } => cmd_verify(cli, group, *property, *theta)?,
        Command::Search { group, max_candidates } => cmd_search(cli, group, *max_candidates)?,
        Command::AlphaScan { r_max, n_max } => cmd_alpha_scan(*r_max, *n_max)?,
    };
    let mut doc = Map::new();
    doc.insert("schema".into(), Value::from(1));
    doc.insert("command".into(), Value::from(command));
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            if k != "schema" {
                doc.insert(k, v);
            }
        }
    }
    if cli.verbose {
        let ms = started.elapsed().as_millis() as u64;
        doc.insert("elapsed_ms".into(), Value::from(ms));
        let _ = writeln!(text, "elapsed            {ms} ms");
    }
    let rendered = match cli.format {
        Format::Json => to_json(&Value::Object(doc))? + "\n",
        Format::Text => text,
    };
    Ok(Output { rendered, exit })
}

type Response = (&'static str, Value, String, u8);

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Inconsistent(format!("serialization failed: {e}")))
}

fn to_json(v: &Value) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Inconsistent(format!("serialization failed: {e}")))
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// Group parameters after validation, before any enumeration.
struct Target {
    family: Option<Family>,
    n: usize,
    /// `None` for `B_n^+`, which is not of the form `G(r,p,n)`.
    spec: Option<GroupSpec>,
    name: String,
}

fn uses_variant_flags(args: &GroupArgs) -> bool {
    args.alpha.is_some() || args.beta.is_some() || args.zero
}

fn resolve(cli: &Cli, args: &GroupArgs) -> Result<Target> {
    let unsupported = |m: String| Error::UnsupportedParameters(m);
    if args.zero && args.beta.is_some() {
        return Err(unsupported("--zero and --beta are mutually exclusive".into()));
    }
    let target = match args.family {
        Some(family) => {
            if uses_variant_flags(args) || args.p.is_some() {
                return Err(unsupported(
                    "--p, --alpha, --beta and --zero apply only to G(r,p,n) without --family".into(),
                ));
            }
            if args.r.is_some() && family != Family::Tau {
                return Err(unsupported(format!("--r does not apply to --family {family:?}")));
            }
            let n = args.n.ok_or_else(|| Error::InvalidSpec("--family needs --n".into()))?;
            let (spec, name) = match family {
                Family::A => (Some(GroupSpec::new(1, 1, n)?), format!("S_{n}")),
                Family::B => (Some(GroupSpec::new(2, 1, n)?), format!("B_{n}")),
                Family::D => (Some(GroupSpec::new(2, 2, n)?), format!("D_{n}")),
                Family::Bplus => (None, format!("B_{n}^+")),
                Family::Tau => {
                    let r = args.r.ok_or_else(|| Error::InvalidSpec("--family tau needs --r".into()))?;
                    let spec = GroupSpec::wreath(r, n)?;
                    (Some(spec), spec.to_string())
                }
            };
            Target { family: Some(family), n, spec, name }
        }
        None => {
            let (Some(r), Some(n)) = (args.r, args.n) else {
                return Err(Error::InvalidSpec("give --r and --n (and optionally --p), or --family with --n".into()));
            };
            let spec = GroupSpec::new(r, args.p.unwrap_or(1), n)?;
            Target { family: None, n, spec: Some(spec), name: spec.to_string() }
        }
    };
    let ambient = match target.spec {
        Some(s) => s,
        None => GroupSpec::new(2, 1, target.n)?,
    };
    ambient.check_ceiling(cli.max_order)?;
    Ok(target)
}

impl Target {
    fn basis(&self, args: &GroupArgs) -> Result<Basis> {
        match (self.family, self.spec) {
            (Some(Family::A), _) => Ok(sn_basis(self.n)),
            (Some(Family::B), _) => weyl_basis(WeylType::B(self.n)),
            (Some(Family::D), _) => weyl_basis(WeylType::D(self.n)),
            (Some(Family::Bplus), _) => bplus_basis(self.n),
            (Some(Family::Tau), Some(spec)) => Ok(wreath_basis(spec.r, spec.n)),
            (_, Some(spec)) => {
                let variant = match (args.zero, args.beta) {
                    (true, _) => RpnVariant::Zero,
                    (false, Some(b)) => RpnVariant::Beta(b),
                    (false, None) => RpnVariant::Standard,
                };
                match args.alpha {
                    Some(a) => rpn_basis_with_alpha(&spec, a, variant),
                    None => rpn_basis(&spec, variant),
                }
            }
            (_, None) => Err(Error::Inconsistent("target without group".into())),
        }
    }

    fn group(&self, cli: &Cli) -> Result<ElementSet> {
        match self.spec {
            Some(spec) => enumerate_group(&spec, cli.max_order),
            None => Ok(SignedGroups::new(self.n)?.bplus),
        }
    }

    /// Generating set whose length function defines the Poincaré series.
    fn generators(&self) -> Option<Vec<ColoredPerm>> {
        let n = self.n;
        match (self.family, self.spec) {
            (Some(Family::Bplus), _) if n >= 2 => Some(verify::bn_plus_symmetric_generators(n)),
            (Some(Family::Tau), _) => None,
            (_, Some(s)) if (s.r, s.p) == (1, 1) => Some(coxeter_generators_a(n)),
            (_, Some(s)) if (s.r, s.p) == (2, 1) => Some(coxeter_generators_b(n)),
            (_, Some(s)) if (s.r, s.p) == (2, 2) && n >= 2 => Some(coxeter_generators_d(n)),
            _ => None,
        }
    }

    fn signed(&self) -> bool {
        let by_family = matches!(self.family, Some(Family::B | Family::D | Family::Bplus));
        let by_spec = self.family.is_none() && self.spec.is_some_and(|s| s.r == 2);
        self.n >= 2 && (by_family || by_spec)
    }
}

fn no_poincare(t: &Target) -> Error {
    Error::UnsupportedParameters(format!(
        "no Coxeter-type generating set for {}; Poincaré series are available for --family A|B|D|Bplus and G(1,1,n), G(2,1,n), G(2,2,n)",
        t.name
    ))
}

fn validated(cli: &Cli, target: &Target, args: &GroupArgs) -> Result<(Basis, ElementSet, DecompositionTable)> {
    let basis = target.basis(args)?;
    let group = target.group(cli)?;
    let table = validate_basis(&basis, &group, Execution::Auto)?;
    Ok((basis, group, table))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_basis(cli: &Cli, args: &GroupArgs) -> Result<Response> {
    let target = resolve(cli, args)?;
    let (basis, group, table) = validated(cli, &target, args)?;
    let record = basis.record();
    let mut text = String::new();
    let _ = writeln!(text, "basis              {}", record.label);
    let _ = writeln!(text, "group              {}, order {}", target.name, group.len());
    if let Some(a) = record.alpha {
        let _ = writeln!(text, "alpha              {a}");
    }
    if let Some(b) = record.beta {
        let _ = writeln!(text, "beta               {b}");
    }
    let _ = writeln!(text, "moduli             {}", join(&record.moduli));
    let _ = writeln!(text, "orders             {}", join(&record.orders));
    let _ = writeln!(text, "perfect            {}", if record.perfect { "yes" } else { "no" });
    let _ = writeln!(text, "elements");
    for (i, e) in record.elements.iter().enumerate() {
        let _ = writeln!(text, "  a_{} = {e}", i + 1);
    }
    let _ = writeln!(text, "DISTINCT-PRODUCTS: OK ({} of {})", table.len(), group.len());
    let body = object(vec![
        ("group", Value::from(target.name.clone())),
        ("group_order", Value::from(group.len() as u64)),
        ("basis", to_value(&record)?),
        ("distinct_products", Value::from(table.len() as u64)),
        ("status", Value::from("OK")),
    ]);
    Ok(("basis", body, text, 0))
}

fn cmd_decompose(cli: &Cli, args: &GroupArgs, element: &str, method: MethodArg, full: bool) -> Result<Response> {
    let target = resolve(cli, args)?;
    let basis = target.basis(args)?;
    let r = basis.r();
    let g = ColoredPerm::parse(element, r)?;
    if g.n() != target.n {
        return Err(Error::Dimension { expected_n: target.n, expected_r: r, n: g.n(), r: g.r() });
    }
    let group = target.group(cli)?;
    if !group.contains(&g) {
        return Err(Error::NotInGroup(format!("{g} (group {})", target.name)));
    }
    let method = match method {
        MethodArg::Table => Method::Table,
        MethodArg::Peel => Method::Peel,
    };
    let ks = decompose(&g, &basis, method)?;
    let fmaj = ks.sum();
    let mut text = String::new();
    if full {
        let _ = writeln!(text, "element            {g}");
        let _ = writeln!(text, "basis              {}", basis.label());
        let _ = writeln!(text, "exponents          {ks}");
        let _ = writeln!(text, "fmaj               {fmaj}");
        let body = object(vec![
            ("element", Value::from(g.to_string())),
            ("basis", Value::from(basis.label())),
            ("moduli", to_value(&basis.moduli())?),
            ("exponents", to_value(&ks)?),
            ("fmaj", Value::from(fmaj)),
        ]);
        Ok(("decompose", body, text, 0))
    } else {
        let _ = writeln!(text, "{fmaj}");
        let body = object(vec![
            ("element", Value::from(g.to_string())),
            ("basis", Value::from(basis.label())),
            ("fmaj", Value::from(fmaj)),
        ]);
        Ok(("fmaj", body, text, 0))
    }
}

fn cmd_series(cli: &Cli, args: &GroupArgs, kind: SeriesKind) -> Result<Response> {
    let target = resolve(cli, args)?;
    let (name, poly, basis_label): (&str, QPolynomial, Option<String>) = match kind {
        SeriesKind::Hilbert => {
            if uses_variant_flags(args) {
                return Err(Error::UnsupportedParameters(
                    "the Hilbert series does not depend on --alpha/--beta/--zero".into(),
                ));
            }
            let spec = target
                .spec
                .ok_or_else(|| Error::UnsupportedParameters(format!("{} is not of the form G(r,p,n)", target.name)))?;
            ("hilbert", hilbert_polynomial(&spec), None)
        }
        SeriesKind::Poincare => {
            let gens = target.generators().ok_or_else(|| no_poincare(&target))?;
            let group = target.group(cli)?;
            ("poincare", poincare_polynomial(&group, &gens)?, None)
        }
        SeriesKind::Fmaj => {
            let (basis, group, table) = validated(cli, &target, args)?;
            ("fmaj", fmaj_polynomial(&basis, &table, &group)?, Some(basis.label().to_string()))
        }
    };
    let text = format!("{poly}\n");
    let mut pairs = vec![("kind", Value::from(name)), ("group", Value::from(target.name.clone()))];
    if let Some(label) = basis_label {
        pairs.push(("basis", Value::from(label)));
    }
    pairs.push(("coefficients", to_value(&poly)?));
    pairs.push(("polynomial", Value::from(poly.to_string())));
    Ok(("series", object(pairs), text, 0))
}

fn signed_degree(cli: &Cli, args: &GroupArgs) -> Result<usize> {
    let n = args.n.ok_or_else(|| Error::InvalidSpec("--n is required".into()))?;
    if n < 2 {
        return Err(Error::UnsupportedParameters("the D_n / B_n^+ checks need n >= 2".into()));
    }
    GroupSpec::new(2, 1, n)?.check_ceiling(cli.max_order)?;
    Ok(n)
}

fn psi_theta_reports(n: usize, reading: ThetaReading) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify::check_bn_plus_relations(n)?,
        verify::bplus_presentation(n)?,
        verify::bplus_mahonian(n)?,
        verify::psi_bijection(n)?,
        verify::theta_bijection(n, reading)?,
        verify::fmaj_psi_invariance(n)?,
        verify::length_theta_invariance(n, reading)?,
        verify::bplus_chain(n)?.1,
    ])
}

fn cmd_verify(cli: &Cli, args: &GroupArgs, property: Property, theta: ThetaArg) -> Result<Response> {
    let reading = match theta {
        ThetaArg::Prose => ThetaReading::Prose,
        ThetaArg::Display => ThetaReading::Display,
    };
    let mut reports = Vec::new();
    match property {
        Property::Mahonian | Property::Hilbertian | Property::All => {
            let target = resolve(cli, args)?;
            let gens = target.generators();
            if property == Property::Mahonian && gens.is_none() {
                return Err(no_poincare(&target));
            }
            if property == Property::Hilbertian && target.spec.is_none() {
                return Err(Error::UnsupportedParameters(format!("{} is not of the form G(r,p,n)", target.name)));
            }
            let (basis, group, _) = validated(cli, &target, args)?;
            if property != Property::Hilbertian {
                if let Some(gens) = &gens {
                    reports.push(verify::is_mahonian(&basis, &group, gens, &target.name)?);
                }
            }
            if property != Property::Mahonian {
                if let Some(spec) = &target.spec {
                    reports.push(verify::is_hilbertian(&basis, spec)?);
                }
            }
            if property == Property::All && target.signed() {
                reports.extend(psi_theta_reports(target.n, reading)?);
                reports.push(verify::parity_criterion(target.n)?);
            }
        }
        Property::PsiTheta => reports.extend(psi_theta_reports(signed_degree(cli, args)?, reading)?),
        Property::Parity => reports.push(verify::parity_criterion(signed_degree(cli, args)?)?),
    }
    if !cli.verbose {
        reports = reports.into_iter().map(VerificationReport::without_timing).collect();
    }
    let failures = reports.iter().filter(|r| !r.holds).count();
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{r}");
    }
    let _ = writeln!(text, "{} checks, {} failed", reports.len(), failures);
    let body = object(vec![("reports", to_value(&reports)?), ("failures", Value::from(failures as u64))]);
    Ok(("verify", body, text, if failures == 0 { 0 } else { 1 }))
}

fn render_search(out: &SearchOutcome) -> String {
    let mut text = String::new();
    let orderings: Vec<String> = out
        .orderings
        .iter()
        .map(|o| format!("({})", o.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(text, "group              {}, order {}", out.spec, out.group_order);
    let _ = writeln!(text, "required orders    {}", join(&out.orders));
    let _ = writeln!(text, "orderings          {}", orderings.join(" "));
    let _ = writeln!(text, "orderings tried    {}", out.orderings_tried);
    let _ = writeln!(text, "candidates         {}", out.candidates_examined);
    match (&out.found, out.exhausted, &out.stopped_by) {
        (Some(found), _, _) => {
            let _ = writeln!(text, "result             found {}", found.label);
            for (i, e) in found.elements.iter().enumerate() {
                let _ = writeln!(text, "  a_{} = {e}  (order {})", i + 1, found.orders[i]);
            }
        }
        (None, true, _) => {
            let _ = writeln!(text, "result             exhausted, no perfect Hilbertian basis");
        }
        (None, false, reason) => {
            let _ = writeln!(
                text,
                "result             not exhausted (stopped by {})",
                reason.as_deref().unwrap_or("limit")
            );
        }
    }
    let _ = writeln!(text, "scope              {}", out.scope);
    text
}

fn cmd_search(cli: &Cli, args: &GroupArgs, max_candidates: Option<u64>) -> Result<Response> {
    if uses_variant_flags(args) {
        return Err(Error::UnsupportedParameters("--alpha/--beta/--zero do not apply to search".into()));
    }
    let target = resolve(cli, args)?;
    let spec = target
        .spec
        .ok_or_else(|| Error::UnsupportedParameters(format!("{} is not of the form G(r,p,n)", target.name)))?;
    let limits =
        SearchLimits { time_limit: Some(Duration::from_secs(cli.time_limit)), max_candidates, ceiling: cli.max_order };
    let mut out = search_perfect_hilbertian(&spec, limits, Execution::from_workers(cli.workers))?;
    if !cli.verbose {
        out = out.without_timing();
    }
    Ok(("search", to_value(&out)?, render_search(&out), 0))
}

fn cmd_alpha_scan(r_max: u32, n_max: usize) -> Result<Response> {
    let scan = alpha_scan(r_max, n_max)?;
    let mut text = String::new();
    let _ = writeln!(text, "{:>4} {:>4} {:>4} {:>4} {:>6}", "r", "p", "n", "gcd", "alpha");
    for c in &scan.cells {
        let alpha = c.alpha.map_or("-".to_string(), |a| a.to_string());
        let _ = writeln!(text, "{:>4} {:>4} {:>4} {:>4} {:>6}", c.r, c.p, c.n, c.gcd, alpha);
    }
    let coprime = scan.cells.iter().filter(|c| c.gcd == 1).count();
    let _ = writeln!(text, "{} cells with gcd(n,p,r/p) = 1, {} without alpha", coprime, scan.failures.len());
    let exit = if scan.failures.is_empty() { 0 } else { 1 };
    Ok(("alpha-scan", to_value(&scan)?, text, exit))
}
