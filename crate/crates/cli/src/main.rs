use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use realize_core::monomial::{hilbert_function, MonomialRing};
use realize_core::plan::{emit_plan, emit_plan_truncated, Factor, RealizationPlan};
use realize_core::verify::{golden_example, golden_json, verify, VerificationReport};
use realize_core::{parse_presentation, pretty_print};

#[derive(Parser)]
#[command(name = "realize", version, about = "Realization plans and exact checks for monomial ideal rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation and print it in canonical form.
    Parse(Io),
    /// Ranks of the ring in each degree up to --dmax.
    Hilbert(Io),
    /// Polarize the ideal.
    Polarize(Io),
    /// Emit the realization plan. With --dmax, comparison-model generators
    /// above that degree are left out.
    Plan(Io),
    /// Run every check up to --dmax.
    Verify(Io),
    /// The bundled example and its verification.
    Example(Output),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Io {
    /// Presentation file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    dmax: Option<u32>,
    #[command(flatten)]
    output: Output,
}

const DEFAULT_D_MAX: u32 = 40;

enum Failure {
    Input(String),
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Parse(io) => {
            let ring = read_ring(&io)?;
            let text = match io.output.format {
                Format::Json => json_string(&ring_json(&ring)),
                Format::Text => pretty_print(&ring) + "\n",
            };
            write_out(&io.output, &text)
        }
        Command::Hilbert(io) => {
            let ring = read_ring(&io)?;
            let d_max = io.dmax.unwrap_or(DEFAULT_D_MAX);
            let h = hilbert_function(&ring, d_max);
            let text = match io.output.format {
                Format::Json => json_string(&json!({ "d_max": d_max, "ranks": h.ranks })),
                Format::Text => {
                    let mut s = String::from("degree  rank\n");
                    for (d, r) in h.ranks.iter().enumerate() {
                        writeln!(s, "{d:>6}  {r}").unwrap();
                    }
                    s
                }
            };
            write_out(&io.output, &text)
        }
        Command::Polarize(io) => {
            let plan = plan_for(&io)?;
            let text = match io.output.format {
                Format::Json => json_string(&plan.polarization),
                Format::Text => polarization_text(&plan),
            };
            write_out(&io.output, &text)
        }
        Command::Plan(io) => {
            let plan = plan_for(&io)?;
            let text = match io.output.format {
                Format::Json => plan.to_json(),
                Format::Text => plan_text(&plan),
            };
            write_out(&io.output, &text)
        }
        Command::Verify(io) => {
            let ring = read_ring(&io)?;
            let report = verify(&ring, io.dmax.unwrap_or(DEFAULT_D_MAX)).map_err(|e| Failure::Input(e.to_string()))?;
            let text = match io.output.format {
                Format::Json => json_string(&report),
                Format::Text => report_text(&report),
            };
            write_out(&io.output, &text)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Example(output) => {
            let (text, passed) = match output.format {
                Format::Json => {
                    let (_, report) = golden_example();
                    (golden_json(), report.passed())
                }
                Format::Text => {
                    let (plan, report) = golden_example();
                    (format!("{}\n{}", plan_text(&plan), report_text(&report)), report.passed())
                }
            };
            write_out(&output, &text)?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn read_ring(io: &Io) -> Result<MonomialRing, Failure> {
    let (label, text) = match &io.input {
        Some(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        ),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            ("<stdin>".to_string(), s)
        }
    };
    parse_presentation(&text).map_err(|e| Failure::Input(format!("{label}:{e}")))
}

fn plan_for(io: &Io) -> Result<RealizationPlan, Failure> {
    let ring = read_ring(io)?;
    let plan = match io.dmax {
        Some(d) => emit_plan_truncated(&ring, d),
        None => emit_plan(&ring),
    };
    plan.map_err(|e| Failure::Input(e.to_string()))
}

fn write_out(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_string<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn ring_json(ring: &MonomialRing) -> serde_json::Value {
    json!({
        "even": ring.table().even(),
        "odd": ring.table().odd(),
        "ideal": ring.display_ideal(),
    })
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(", ")
    }
}

fn polarization_text(plan: &RealizationPlan) -> String {
    let p = &plan.polarization;
    let mut s = String::new();
    let bounds: Vec<String> = p.exponent_bounds.iter().map(u32::to_string).collect();
    writeln!(s, "exponent bounds: {}", bounds.join(" ")).unwrap();
    let vars: Vec<String> = p.variables.iter().map(|v| format!("{}:{}", v.name, v.degree)).collect();
    writeln!(s, "variables:       {}", list(&vars)).unwrap();
    let ws: Vec<String> = p.w_variables.iter().map(|v| format!("{}:{}", v.name, v.degree)).collect();
    writeln!(s, "w variables:     {}", list(&ws)).unwrap();
    writeln!(s, "ideal:           ({})", p.ideal.join(", ")).unwrap();
    s
}

fn plan_text(plan: &RealizationPlan) -> String {
    let mut s = String::new();
    writeln!(s, "source ideal:    ({})", plan.source.ideal.join(", ")).unwrap();
    s.push_str(&polarization_text(plan));
    let nf: Vec<String> = plan
        .complex
        .minimal_non_faces
        .iter()
        .map(|f| format!("{{{}}}", f.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    writeln!(s, "complex:         {} vertices, minimal non-faces {}", plan.complex.vertex_count, list(&nf)).unwrap();
    writeln!(s, "\nfactors").unwrap();
    for f in &plan.factors {
        match f {
            Factor::EilenbergMaclane { vertex, variable, space, .. } | Factor::Sphere { vertex, variable, space, .. } => {
                writeln!(s, "  {vertex:>3}  {variable:<12} {space}").unwrap()
            }
        }
    }
    writeln!(s, "\nfibration {} -> {}", plan.fibration.fiber, plan.fibration.total_space).unwrap();
    if plan.fibration.coordinates.is_empty() {
        writeln!(s, "  no coordinates").unwrap();
    }
    for c in &plan.fibration.coordinates {
        writeln!(s, "  ({},{})  {} = {}  in {}", c.pair.0, c.pair.1, c.map, c.rule, c.space).unwrap();
    }
    let z = &plan.z_model;
    writeln!(s, "\nz-model").unwrap();
    if let Some(t) = z.truncation {
        writeln!(s, "  truncated at degree {t}").unwrap();
    }
    writeln!(s, "  L' = ({})", z.l_prime.join(", ")).unwrap();
    writeln!(s, "  L  = ({})", z.l.join(", ")).unwrap();
    for g in &z.generator_map {
        writeln!(s, "  g({}) = {}", g.source, g.image).unwrap();
    }
    writeln!(
        s,
        "\nexact cohomology: {}\nfree split: {}",
        plan.flags.exact_cohomology, plan.flags.free_split
    )
    .unwrap();
    s
}

fn report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    for r in &report.records {
        writeln!(s, "{:<28} d<={:<4} {}", r.name, r.d_max, r.verdict).unwrap();
        for w in &r.witnesses {
            writeln!(s, "    {w}").unwrap();
        }
    }
    writeln!(s, "overall: {}", report.overall).unwrap();
    s
}
