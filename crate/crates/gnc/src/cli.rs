//! Command-line surface: parse inputs, run verifications and conversions,
//! print entropy tables and structured reports, the butterfly demo, and the
//! homomorphism-extension survey.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::charac::{
    characterization_entropy, characterization_matches_code, induced_joint_distribution,
    parse_characterization_with, GroupCharacterization, ProbeDepth,
};
use crate::convert::{
    abelian_char_to_cwl, abelian_roundtrip, cwl_to_characterization, linear_global_to_local,
    linear_local_to_global, parse_linear_file, thm5_joint_matches,
};
use crate::cwl::{check_consistent_cwl_family, parse_cwl_file, verify_cwl};
use crate::group::parse_group_file;
use crate::net::{
    capacity_warnings, derive_globals, joint_distribution, parse_network_file, verify_decoding,
    DecodingOutcome,
};
use crate::render;
use crate::report::Report;
use crate::survey;

/// Outcome of one CLI invocation: the structured report, the rendered
/// output, and the exit code (0 pass, 1 fail, 2 usage/parse error).
pub struct CommandResult {
    pub report: Report,
    pub rendered: String,
    pub exit_code: i32,
}

impl CommandResult {
    pub fn status(&self) -> crate::report::Status {
        self.report.status
    }

    fn from_report(report: Report, json: bool, artifact: Option<String>) -> Self {
        let mut rendered = report.render(json);
        if let Some(text) = artifact {
            if !json {
                rendered.push_str("---\n");
                rendered.push_str(&text);
            }
        }
        let exit_code = report.exit_code();
        CommandResult {
            report,
            rendered,
            exit_code,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gnc",
    about = "Finite-group network codes: verification and conversions between linear, group-characterizable, and coordinate-wise-linear encodings",
    after_help = "The env var GNC_MAX_GROUP_ORDER overrides the soft cap of 512 on group orders."
)]
struct Cli {
    /// Emit the structured report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Run independent per-group stages of the survey in parallel (output
    /// ordering is unchanged).
    #[arg(long, global = true)]
    parallel: bool,
    /// Write the converted artifact to this path instead of stdout.
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the group axioms (and any subgroup lines) of a group file.
    VerifyGroup { file: PathBuf },
    /// Check every cwl block of a file: homomorphism, surjectivity, Abelian flag.
    VerifyCwl { file: PathBuf },
    /// Derive globals for an instance file with tables and verify decoding.
    VerifyCode { file: PathBuf },
    /// Entropy of a variable set: the subgroup-index formula and the
    /// brute-force distribution, side by side.
    Entropy {
        file: PathBuf,
        /// Comma-separated variable ids.
        #[arg(long)]
        vars: String,
    },
    /// Run one of the conversion theorems.
    Convert {
        #[command(subcommand)]
        kind: ConvertKind,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoKind,
    },
    /// Enumerate Abelian groups, subgroups, and partial homomorphisms, and
    /// report which ones extend.
    Lemma2Survey {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        /// Cyclic target orders (default 2..=8).
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum ConvertKind {
    /// Linear locals to globals by matrix composition.
    #[command(name = "thm1-l2g")]
    Thm1L2g { instance: PathBuf, linear: PathBuf },
    /// Linear globals to locals by solving the per-edge systems.
    #[command(name = "thm1-g2l")]
    Thm1G2l { instance: PathBuf, linear: PathBuf },
    /// Abelian characterization of a global function to a CWL function.
    Thm4 {
        instance: PathBuf,
        characterization: PathBuf,
        #[arg(long)]
        edge: String,
    },
    /// CWL global function to a group characterization with isomorphisms.
    Thm5 {
        cwl: PathBuf,
        /// Function name when the file has several blocks.
        #[arg(long)]
        name: Option<String>,
    },
    /// Consistent local CWL family to the global CWL family.
    Thm6 { instance: PathBuf, cwl: PathBuf },
    /// Consistent Abelian global CWL family to a local CWL family.
    Thm7 { instance: PathBuf, cwl: PathBuf },
    /// Full Abelian round trip over a characterization of the whole code.
    Cor1 {
        instance: PathBuf,
        characterization: PathBuf,
    },
}

#[derive(Subcommand)]
enum DemoKind {
    /// The two-source butterfly with the XOR bottleneck.
    Butterfly,
}

/// Entry point used by both the binary and the tests.
pub fn run(argv: &[String]) -> CommandResult {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let mut report = Report::new("gnc");
            report.error("usage", e.kind().to_string());
            return CommandResult {
                report,
                rendered,
                exit_code: 2,
            };
        }
    };
    let json = cli.json;
    let out_path = cli.out.clone();
    let (mut report, artifact) = dispatch(cli);
    let inline = match (out_path, artifact) {
        (None, artifact) => artifact,
        (Some(path), Some(text)) => {
            match std::fs::write(&path, &text) {
                Ok(()) => report.pass("write", format!("artifact written to {}", path.display())),
                Err(e) => report.error("write", format!("{}: {e}", path.display())),
            }
            None
        }
        (Some(_), None) => None,
    };
    CommandResult::from_report(report, json, inline)
}

fn read(path: &Path, report: &mut Report) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Some(text),
        Err(e) => {
            report.error("read", format!("{}: {e}", path.display()));
            None
        }
    }
}

fn fs_loader(base: PathBuf) -> impl Fn(&str) -> Result<String, String> {
    move |rel: &str| {
        let path = base.join(rel);
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_characterization(path: &Path, report: &mut Report) -> Option<GroupCharacterization> {
    let text = read(path, report)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    match parse_characterization_with(&text, &fs_loader(base)) {
        Ok(c) => Some(c),
        Err(e) => {
            report.error("parse", e.to_string());
            None
        }
    }
}

fn dispatch(cli: Cli) -> (Report, Option<String>) {
    match cli.command {
        Command::VerifyGroup { file } => cmd_verify_group(&file),
        Command::VerifyCwl { file } => cmd_verify_cwl(&file),
        Command::VerifyCode { file } => cmd_verify_code(&file),
        Command::Entropy { file, vars } => cmd_entropy(&file, &vars),
        Command::Convert { kind } => cmd_convert(kind),
        Command::Demo {
            which: DemoKind::Butterfly,
        } => cmd_demo_butterfly(),
        Command::Lemma2Survey { max_order, targets } => cmd_survey(
            max_order,
            targets.unwrap_or_else(survey::default_targets),
            cli.parallel,
        ),
    }
}

fn cmd_verify_group(file: &Path) -> (Report, Option<String>) {
    let mut report = Report::new("verify-group");
    let Some(text) = read(file, &mut report) else {
        return (report, None);
    };
    match parse_group_file(&text) {
        Ok(parsed) => {
            report.pass(
                "axioms",
                format!(
                    "group {} of order {} is valid ({})",
                    parsed.group.label(),
                    parsed.group.order(),
                    if parsed.group.is_abelian() {
                        "Abelian"
                    } else {
                        "non-Abelian"
                    }
                ),
            );
            for (label, sub) in &parsed.subgroups {
                report.pass(
                    format!("subgroup {label}"),
                    format!(
                        "order {} (index {})",
                        sub.size(),
                        parsed.group.order() / sub.size()
                    ),
                );
            }
        }
        Err(e) => report.fail("axioms", e.to_string()),
    }
    (report, None)
}

fn cmd_verify_cwl(file: &Path) -> (Report, Option<String>) {
    let mut report = Report::new("verify-cwl");
    let Some(text) = read(file, &mut report) else {
        return (report, None);
    };
    let functions = match parse_cwl_file(&text) {
        Ok(f) => f,
        Err(e) => {
            report.error("parse", e.to_string());
            return (report, None);
        }
    };
    for f in &functions {
        let check = verify_cwl(f);
        let detail = format!(
            "homomorphism: {}, surjective: {}, Abelian: {}{}",
            check.is_hom,
            check.surjective,
            check.abelian,
            check
                .witness
                .as_ref()
                .map(|(a, b)| format!(", witness pair {a:?} {b:?}"))
                .unwrap_or_default()
        );
        if check.is_cwl() {
            report.pass(format!("cwl {}", f.name), detail);
        } else {
            report.fail(format!("cwl {}", f.name), detail);
        }
    }
    let family = check_consistent_cwl_family(&functions);
    if family.consistent {
        report.pass(
            "family",
            "consistent: shared variables use identical groups",
        );
    } else {
        report.fail(
            "family",
            family
                .conflict
                .map(|v| format!("variable {v} bound to different groups"))
                .unwrap_or_else(|| "a member fails the CWL check".to_string()),
        );
    }
    (report, None)
}

fn cmd_verify_code(file: &Path) -> (Report, Option<String>) {
    let mut report = Report::new("verify-code");
    let Some(text) = read(file, &mut report) else {
        return (report, None);
    };
    let parsed = match parse_network_file(&text) {
        Ok(p) => p,
        Err(e) => {
            report.error("parse", e.to_string());
            return (report, None);
        }
    };
    report.pass(
        "parse",
        format!(
            "{} nodes, {} edges, {} sources, {} terminals",
            parsed.instance.node_count() - parsed.instance.source_labels().len(),
            parsed.instance.edges().len(),
            parsed.instance.source_labels().len(),
            parsed.instance.terminal_labels().len()
        ),
    );
    let code = match derive_globals(&parsed.instance, &parsed.code) {
        Ok(c) => c,
        Err(e) => {
            report.fail("globals", e.to_string());
            return (report, None);
        }
    };
    report.pass("globals", "derived for every edge");
    let warnings = capacity_warnings(&parsed.instance, &code);
    if warnings.is_empty() {
        report.pass("capacity", "all edge alphabets fit the capacities");
    } else {
        report.pass("capacity", format!("warnings: {}", warnings.join("; ")));
    }
    match verify_decoding(&parsed.instance, &code) {
        Ok(DecodingOutcome::Pass) => {
            report.pass("decoding", "every terminal decodes every source tuple")
        }
        Ok(DecodingOutcome::Fail {
            terminal,
            source_tuple,
        }) => report.fail(
            "decoding",
            format!("terminal {terminal} fails on source tuple {source_tuple:?}"),
        ),
        Err(e) => report.fail("decoding", e.to_string()),
    }
    (report, None)
}

fn cmd_entropy(file: &Path, vars: &str) -> (Report, Option<String>) {
    let mut report = Report::new("entropy");
    let Some(char) = load_characterization(file, &mut report) else {
        return (report, None);
    };
    let vars: Vec<String> = vars
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if vars.is_empty() {
        report.error("vars", "no variables given");
        return (report, None);
    }
    let formula = match characterization_entropy(&char, &vars) {
        Ok(h) => h,
        Err(e) => {
            report.fail("formula", e.to_string());
            return (report, None);
        }
    };
    let dist = match induced_joint_distribution(&char, &vars) {
        Ok(d) => d,
        Err(e) => {
            report.fail("brute-force", e.to_string());
            return (report, None);
        }
    };
    let brute = dist.entropy_bits();
    report.pass(
        "formula",
        format!("H({}) = {formula:.6} bits (log2 |G|/|G_a|)", vars.join(",")),
    );
    report.pass(
        "brute-force",
        format!(
            "H = {brute:.6} bits over {} support points, quasi-uniform: {}",
            dist.len(),
            dist.is_quasi_uniform()
        ),
    );
    if (formula - brute).abs() <= 1e-9 {
        report.pass("cross-check", "formula and brute force agree within 1e-9");
    } else {
        report.fail(
            "cross-check",
            format!("difference {:.3e}", (formula - brute).abs()),
        );
    }
    (report, None)
}

fn cmd_convert(kind: ConvertKind) -> (Report, Option<String>) {
    match kind {
        ConvertKind::Thm1L2g { instance, linear } => cmd_thm1(&instance, &linear, true),
        ConvertKind::Thm1G2l { instance, linear } => cmd_thm1(&instance, &linear, false),
        ConvertKind::Thm4 {
            instance,
            characterization,
            edge,
        } => cmd_thm4(&instance, &characterization, &edge),
        ConvertKind::Thm5 { cwl, name } => cmd_thm5(&cwl, name.as_deref()),
        ConvertKind::Thm6 { instance, cwl } => cmd_thm6_or_7(&instance, &cwl, true),
        ConvertKind::Thm7 { instance, cwl } => cmd_thm6_or_7(&instance, &cwl, false),
        ConvertKind::Cor1 {
            instance,
            characterization,
        } => cmd_cor1(&instance, &characterization),
    }
}

fn parse_instance_file(path: &Path, report: &mut Report) -> Option<crate::net::NetworkFile> {
    let text = read(path, report)?;
    match parse_network_file(&text) {
        Ok(p) => Some(p),
        Err(e) => {
            report.error("parse", e.to_string());
            None
        }
    }
}

fn cmd_thm1(instance: &Path, linear: &Path, local_to_global: bool) -> (Report, Option<String>) {
    let name = if local_to_global {
        "convert thm1-l2g"
    } else {
        "convert thm1-g2l"
    };
    let mut report = Report::new(name);
    let Some(parsed) = parse_instance_file(instance, &mut report) else {
        return (report, None);
    };
    let Some(text) = read(linear, &mut report) else {
        return (report, None);
    };
    let code = match parse_linear_file(&text) {
        Ok(c) => c,
        Err(e) => {
            report.error("parse", e.to_string());
            return (report, None);
        }
    };
    if local_to_global {
        match linear_local_to_global(&parsed.instance, &code) {
            Ok(full) => {
                report.pass(
                    "compose",
                    "global matrices derived along the topological order",
                );
                match crate::convert::linear::to_table_code(&parsed.instance, &full) {
                    Ok(table_code) => match derive_globals(&parsed.instance, &table_code) {
                        Ok(_) => {
                            report.pass("table-cross-check", "table realization derives cleanly")
                        }
                        Err(e) => report.fail("table-cross-check", e.to_string()),
                    },
                    Err(e) => report.fail("table-cross-check", e.to_string()),
                }
                let artifact = render::render_linear_file(&full);
                (report, Some(artifact))
            }
            Err(e) => {
                report.fail("compose", e.to_string());
                (report, None)
            }
        }
    } else {
        match linear_global_to_local(&parsed.instance, &code) {
            Ok(full) => {
                report.pass(
                    "solve",
                    "local matrices recovered at every edge (rank condition holds)",
                );
                match linear_local_to_global(&parsed.instance, &full) {
                    Ok(recomposed) => {
                        let same = full
                            .globals
                            .iter()
                            .all(|(e, m)| recomposed.globals.get(e) == Some(m));
                        if same {
                            report.pass(
                                "recompose",
                                "recovered locals reproduce the globals exactly",
                            );
                        } else {
                            report.fail("recompose", "recomposed globals differ");
                        }
                    }
                    Err(e) => report.fail("recompose", e.to_string()),
                }
                let artifact = render::render_linear_file(&full);
                (report, Some(artifact))
            }
            Err(e) => {
                report.fail("solve", e.to_string());
                (report, None)
            }
        }
    }
}

fn cmd_thm4(instance: &Path, characterization: &Path, edge: &str) -> (Report, Option<String>) {
    let mut report = Report::new("convert thm4");
    let Some(parsed) = parse_instance_file(instance, &mut report) else {
        return (report, None);
    };
    let Some(char) = load_characterization(characterization, &mut report) else {
        return (report, None);
    };
    let sources: Vec<String> = parsed
        .instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    match abelian_char_to_cwl(&char, &sources, edge) {
        Ok(out) => {
            report.pass(
                "preconditions",
                "ambient group Abelian, trivial source intersection, independence equation holds",
            );
            let check = verify_cwl(&out.function);
            if check.is_cwl() {
                report.pass("verify-cwl", "converted map passes the exhaustive check");
            } else {
                report.fail("verify-cwl", "converted map failed the exhaustive check");
            }
            let artifact = render::render_cwl_file(std::slice::from_ref(&out.function));
            (report, Some(artifact))
        }
        Err(e) => {
            report.fail("thm4", e.to_string());
            (report, None)
        }
    }
}

fn cmd_thm5(cwl: &Path, name: Option<&str>) -> (Report, Option<String>) {
    let mut report = Report::new("convert thm5");
    let Some(text) = read(cwl, &mut report) else {
        return (report, None);
    };
    let functions = match parse_cwl_file(&text) {
        Ok(f) => f,
        Err(e) => {
            report.error("parse", e.to_string());
            return (report, None);
        }
    };
    let function = match name {
        Some(n) => functions.iter().find(|f| f.name == n),
        None => functions.first(),
    };
    let Some(function) = function else {
        report.error("select", "no matching cwl block in the file");
        return (report, None);
    };
    match cwl_to_characterization(function) {
        Ok(out) => {
            report.pass(
                "construct",
                format!(
                    "ambient group of order {}, kernel subgroup of size {}",
                    out.char.group().order(),
                    out.char
                        .subgroup(&function.output().0)
                        .map(|s| s.size())
                        .unwrap_or(0)
                ),
            );
            report.pass("psi", "all isomorphisms verified bijective homomorphisms");
            match thm5_joint_matches(function, &out) {
                Ok(true) => report.pass(
                    "joint",
                    "induced distribution matches the code's exactly via psi",
                ),
                Ok(false) => report.fail("joint", "distributions differ"),
                Err(e) => report.fail("joint", e.to_string()),
            }
            let artifact = render::render_characterization(&out.char);
            (report, Some(artifact))
        }
        Err(e) => {
            report.fail("thm5", e.to_string());
            (report, None)
        }
    }
}

fn cmd_thm6_or_7(instance: &Path, cwl: &Path, to_global: bool) -> (Report, Option<String>) {
    let name = if to_global {
        "convert thm6"
    } else {
        "convert thm7"
    };
    let mut report = Report::new(name);
    let Some(parsed) = parse_instance_file(instance, &mut report) else {
        return (report, None);
    };
    let Some(text) = read(cwl, &mut report) else {
        return (report, None);
    };
    let functions = match parse_cwl_file(&text) {
        Ok(f) => f,
        Err(e) => {
            report.error("parse", e.to_string());
            return (report, None);
        }
    };
    let result = if to_global {
        crate::convert::local_cwl_to_global_cwl(&parsed.instance, &functions)
    } else {
        crate::convert::global_cwl_to_local_cwl(&parsed.instance, &functions)
    };
    match result {
        Ok(converted) => {
            for f in &converted {
                let check = verify_cwl(f);
                if check.is_hom {
                    report.pass(
                        format!("edge {}", f.name),
                        format!("CWL (surjective: {})", check.surjective),
                    );
                } else {
                    report.fail(
                        format!("edge {}", f.name),
                        "failed the exhaustive CWL check",
                    );
                }
            }
            if !to_global {
                report.pass("recompose", "locals recompose to the input globals exactly");
            }
            let artifact = render::render_cwl_file(&converted);
            (report, Some(artifact))
        }
        Err(e) => {
            report.fail(if to_global { "thm6" } else { "thm7" }, e.to_string());
            (report, None)
        }
    }
}

fn cmd_cor1(instance: &Path, characterization: &Path) -> (Report, Option<String>) {
    let mut report = Report::new("convert cor1");
    let Some(parsed) = parse_instance_file(instance, &mut report) else {
        return (report, None);
    };
    let Some(char) = load_characterization(characterization, &mut report) else {
        return (report, None);
    };
    run_roundtrip(&mut report, &parsed.instance, &char);
    (report, None)
}

fn run_roundtrip(
    report: &mut Report,
    instance: &crate::net::NetworkInstance,
    char: &GroupCharacterization,
) {
    match abelian_roundtrip(instance, char) {
        Ok(rt) => {
            report.pass(
                "thm4",
                format!("{} global CWL functions built", rt.global_cwl.len()),
            );
            report.pass(
                "thm7",
                format!("{} local CWL functions recovered", rt.local_cwl.len()),
            );
            report.pass("thm6", "locals recomposed to the input globals");
            report.pass(
                "thm5",
                format!(
                    "assembled characterization over group of order {}",
                    rt.assembled.group().order()
                ),
            );
            if rt.psi_exact {
                report.pass(
                    "psi",
                    "per-edge joint distributions match exactly through psi",
                );
            } else {
                report.fail("psi", "a per-edge distribution differs");
            }
            if rt.match_input.matches {
                report.pass(
                    "match-input",
                    "input characterization matches the realized code",
                );
            } else {
                report.fail(
                    "match-input",
                    format!(
                        "mismatch at {:?}",
                        rt.match_input.mismatch.as_ref().map(|(s, _)| s)
                    ),
                );
            }
            if rt.match_assembled.matches {
                report.pass(
                    "match-assembled",
                    "assembled characterization matches the realized code",
                );
            } else {
                report.fail(
                    "match-assembled",
                    format!(
                        "mismatch at {:?}",
                        rt.match_assembled.mismatch.as_ref().map(|(s, _)| s)
                    ),
                );
            }
            match &rt.decode {
                Ok(()) => report.pass("decode", "every terminal can decode the realized code"),
                Err(e) => report.fail("decode", e.to_string()),
            }
        }
        Err(e) => {
            let stage: &'static str = e.stage().unwrap_or("roundtrip");
            report.fail(stage, e.to_string());
        }
    }
}

fn cmd_demo_butterfly() -> (Report, Option<String>) {
    let mut report = Report::new("demo butterfly");
    let (instance, code) = crate::corpus::butterfly();
    let code = match derive_globals(&instance, &code) {
        Ok(c) => c,
        Err(e) => {
            report.fail("globals", e.to_string());
            return (report, None);
        }
    };
    match verify_decoding(&instance, &code) {
        Ok(DecodingOutcome::Pass) => report.pass(
            "decoding",
            "both terminals decode both source bits on all 4 source tuples",
        ),
        Ok(DecodingOutcome::Fail {
            terminal,
            source_tuple,
        }) => report.fail(
            "decoding",
            format!("terminal {terminal} fails on {source_tuple:?}"),
        ),
        Err(e) => report.fail("decoding", e.to_string()),
    }
    let entropy_stage = |stage: &str, vars: &[&str], expected: f64, report: &mut Report| {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        match joint_distribution(&instance, &code, &vars) {
            Ok(d) => {
                let h = d.entropy_bits();
                if (h - expected).abs() <= 1e-9 {
                    report.pass(stage, format!("H({}) = {h:.6} bits", vars.join(",")));
                } else {
                    report.fail(
                        stage,
                        format!("H({}) = {h:.6}, expected {expected}", vars.join(",")),
                    );
                }
            }
            Err(e) => report.fail(stage, e.to_string()),
        }
    };
    entropy_stage("entropy-source", &["s1"], 1.0, &mut report);
    entropy_stage("entropy-bottleneck", &["e5"], 1.0, &mut report);
    entropy_stage("entropy-sources", &["s1", "s2"], 2.0, &mut report);

    let (char, _) = crate::charac::butterfly_characterization();
    match characterization_matches_code(&char, &instance, &code, ProbeDepth::Standard) {
        Ok(m) if m.matches => report.pass(
            "characterization",
            "the Z2xZ2 characterization matches the XOR code",
        ),
        Ok(m) => report.fail(
            "characterization",
            format!("mismatch at {:?}", m.mismatch.map(|(s, _)| s)),
        ),
        Err(e) => report.fail("characterization", e.to_string()),
    }
    run_roundtrip(&mut report, &instance, &char);
    (report, None)
}

fn cmd_survey(max_order: usize, targets: Vec<usize>, parallel: bool) -> (Report, Option<String>) {
    let mut report = Report::new("lemma2-survey");
    match survey::lemma2_survey(max_order, &targets, parallel) {
        Ok(summary) => {
            report.pass(
                "enumerate",
                format!(
                    "{} Abelian groups up to order {}, targets {:?}",
                    summary.groups, summary.max_order, summary.targets
                ),
            );
            report.pass(
                "extensions",
                format!(
                    "{} of {} triples extend ({} via a complement, {} via exhaustive search), {} do not",
                    summary.successes,
                    summary.triples,
                    summary.via_complement,
                    summary.via_fallback,
                    summary.failures.len()
                ),
            );
            for row in &summary.failures {
                let obstruction = row
                    .obstruction
                    .as_ref()
                    .map(|o| format!(" (obstructing subgroup {o:?})"))
                    .unwrap_or_default();
                report.pass("no-extension", format!("{}{}", row.describe(), obstruction));
            }
        }
        Err(e) => report.error("enumerate", e.to_string()),
    }
    (report, None)
}
