mod document;

use clap::{Parser, Subcommand, ValueEnum};
use document::{build, Built, BuiltStructure, Code, Failure, InstanceDocument};
use kbredon::ahss::{e2_page, edge_h0_check, GradedCoeffSystem};
use kbredon::bredon::{apply_coefficients, bredon_homology};
use kbredon::exactla::{cokernel, is_isomorphic, FgAbGroup, IntMatrix};
use kbredon::fincat::colimit;
use kbredon::mvcube::{check_exactness, poset_chain_complex};
use kbredon::recipe::{
    build_beta, build_delta_epsilon, build_gamma, gl_instance, pgl_instance, sl_instance,
    CentralCoeffData, SimplexCoeffData, TwoOrbitCoeffData,
};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "kbredon",
    about = "Exact computations with matrix-presented coefficient systems over finite index categories: homology of equivariant cell structures, spectral pages, and cokernel recipes",
    version
)]
struct Cli {
    /// Write command output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the echo of recorded assumptions
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and run every validation
    Validate { path: PathBuf },
    /// Homology of a cell-complex or poset instance
    Homology {
        path: PathBuf,
        /// Single degree to compute
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
        degree: Option<isize>,
        /// All degrees from 0 to the dimension of the complex
        #[arg(long)]
        all: bool,
    },
    /// Second page of the spectral sequence for a graded instance
    E2 { path: PathBuf },
    /// Degree-0 cokernel of a recipe instance, computed by both pipelines
    K0 {
        path: PathBuf,
        /// Use the central-extension variation (requires a central-ext block)
        #[arg(long)]
        variation: bool,
    },
    /// Colimit of the coefficient system over the whole category
    Colimit { path: PathBuf },
    /// Exactness report for an exact-sequence instance
    Mv { path: PathBuf },
    /// Emit an editable skeleton instance file with placeholder coefficients
    Instance {
        family: Family,
        /// Rank parameter n of the family
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sl,
    Pgl,
    Gl,
}

struct Output {
    target: Option<PathBuf>,
    buffer: String,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.buffer.push_str(s.as_ref());
        self.buffer.push('\n');
    }

    fn finish(self) -> Result<(), Failure> {
        match self.target {
            None => {
                print!("{}", self.buffer);
                Ok(())
            }
            Some(path) => std::fs::write(&path, self.buffer).map_err(|e| {
                Failure::new(Code::Io, format!("cannot write {}: {e}", path.display()))
            }),
        }
    }
}

fn load(path: &PathBuf) -> Result<Built, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(Code::Io, format!("cannot read {}: {e}", path.display())))?;
    let doc: InstanceDocument = serde_json::from_str(&text)
        .map_err(|e| Failure::new(Code::Parse, format!("{}: {e}", path.display())))?;
    build(&doc)
}

fn echo_assertions(out: &mut Output, built: &Built, quiet: bool) {
    if quiet {
        return;
    }
    for a in &built.assertions {
        out.line(format!("recorded assumption: {a}"));
    }
}

fn wrong_kind(expected: &str, built: &Built) -> Failure {
    Failure::new(
        Code::WrongKind,
        format!(
            "this command needs a {expected} structure, but the file contains \"{}\"",
            built.structure.kind_name()
        ),
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut out = Output {
        target: cli.output.clone(),
        buffer: String::new(),
    };
    match cli.command {
        Command::Validate { path } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            out.line(format!(
                "ok: {} objects, {} morphisms, structure kind \"{}\"",
                built.category.objects().len(),
                built.category.morphisms().len(),
                built.structure.kind_name()
            ));
        }
        Command::Homology { path, degree, all } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            let chain = match &built.structure {
                BuiltStructure::CellComplex(x) => apply_coefficients(x, &built.coeff)
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?,
                BuiltStructure::Poset(model) => poset_chain_complex(model)
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?,
                _ => return Err(wrong_kind("cell-complex or poset", &built)),
            };
            let degrees: Vec<isize> = if all {
                (0..chain.groups.len() as isize).collect()
            } else {
                vec![degree.ok_or_else(|| {
                    Failure::new(Code::Parse, "pass either --degree <n> or --all")
                })?]
            };
            for n in degrees {
                let h = chain
                    .homology(n)
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
                out.line(format!("H_{n} = {}", h.render()));
            }
        }
        Command::E2 { path } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            let complex = match &built.structure {
                BuiltStructure::CellComplex(x) => x.clone(),
                BuiltStructure::Poset(model) => model
                    .data
                    .to_cell_complex()
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?,
                _ => return Err(wrong_kind("cell-complex or poset", &built)),
            };
            let graded = match &built.graded {
                Some(g) => g.clone(),
                // without a graded window, treat the plain system as degree 0
                None => GradedCoeffSystem::new(0, vec![built.coeff.clone()])
                    .map_err(|e| Failure::new(Code::Parse, e.to_string()))?,
            };
            let page = e2_page(&complex, &graded)
                .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            out.line(page.render());
            if let Some(f0) = graded.system(0) {
                out.line(format!(
                    "degree-0 edge identification with the colimit: {}",
                    if edge_h0_check(&complex, f0) {
                        "holds"
                    } else {
                        "fails"
                    }
                ));
            }
        }
        Command::K0 { path, variation } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            if variation {
                let inst = match &built.structure {
                    BuiltStructure::CentralExt(inst) => inst,
                    _ => return Err(wrong_kind("central-ext", &built)),
                };
                let via_gamma = cokernel(
                    &build_gamma(inst).map_err(|e| Failure::new(Code::Internal, e.to_string()))?,
                )
                .map_err(|e| Failure::new(Code::Internal, e.to_string()))?
                .0;
                let via_de = cokernel(
                    &build_delta_epsilon(inst)
                        .map_err(|e| Failure::new(Code::Internal, e.to_string()))?,
                )
                .map_err(|e| Failure::new(Code::Internal, e.to_string()))?
                .0;
                out.line(format!("coker(gamma)           = {}", via_gamma.render()));
                out.line(format!("coker(delta + epsilon) = {}", via_de.render()));
                if !is_isomorphic(&via_gamma, &via_de) {
                    return Err(Failure::new(
                        Code::Internal,
                        "the two pipelines disagree; this is an engine bug",
                    ));
                }
                out.line(format!("K_0 = {}", via_gamma.render()));
            } else {
                let inst = match &built.structure {
                    BuiltStructure::Recipe(inst) => inst.clone(),
                    BuiltStructure::CentralExt(inst) => inst.base.clone(),
                    _ => return Err(wrong_kind("recipe", &built)),
                };
                let beta =
                    build_beta(&inst).map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
                let via_coker = cokernel(&beta)
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?
                    .0;
                let complex = inst
                    .one_skeleton()
                    .to_cell_complex()
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
                let via_homology = bredon_homology(&complex, &inst.coeff, 0)
                    .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
                out.line(format!("coker(beta)          = {}", via_coker.render()));
                out.line(format!("H_0 of the 1-skeleton = {}", via_homology.render()));
                if !is_isomorphic(&via_coker, &via_homology) {
                    return Err(Failure::new(
                        Code::Internal,
                        "the two pipelines disagree; this is an engine bug",
                    ));
                }
                out.line(format!("K_0 = {}", via_coker.render()));
            }
        }
        Command::Colimit { path } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            let c =
                colimit(&built.coeff).map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            out.line(format!("colimit = {}", c.render()));
        }
        Command::Mv { path } => {
            let built = load(&path)?;
            echo_assertions(&mut out, &built, cli.quiet);
            let seq = match &built.structure {
                BuiltStructure::ExactSequence(seq) => seq,
                _ => return Err(wrong_kind("exact-sequence", &built)),
            };
            let report = check_exactness(seq)
                .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
            if report.ok() {
                out.line(format!(
                    "exact at all {} interior positions",
                    seq.groups.len().saturating_sub(2)
                ));
            } else {
                for v in &report.violations {
                    out.line(v);
                }
            }
        }
        Command::Instance { family, rank } => {
            let doc = skeleton_document(family, rank)?;
            let text = serde_json::to_string_pretty(&doc)
                .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            out.line(text);
        }
    }
    out.finish()
}

/// Placeholder skeleton: rank-1 free groups everywhere and identity matrices,
/// ready for hand-editing with real coefficient data.
fn skeleton_document(family: Family, rank: usize) -> Result<InstanceDocument, Failure> {
    if rank == 0 {
        return Err(Failure::new(Code::Parse, "--rank must be positive"));
    }
    let one = FgAbGroup::free(1);
    let id = IntMatrix::identity(1);
    let note = "placeholder coefficients: every group is Z and every map the identity; replace with real data".to_string();
    match family {
        Family::Sl => {
            let mut edge_data = BTreeMap::new();
            for i in 0..rank {
                for j in (i + 1)..rank {
                    edge_data.insert((i, j), (one.clone(), id.clone(), id.clone()));
                }
            }
            let inst = sl_instance(
                rank,
                &SimplexCoeffData {
                    vertex_groups: vec![one; rank],
                    edge_data,
                },
            )
            .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            Ok(document::document_from_recipe(&inst, vec![note]))
        }
        Family::Pgl => {
            if rank < 2 {
                return Err(Failure::new(Code::Parse, "--rank must be at least 2"));
            }
            let k = rank / 2;
            let inst = pgl_instance(
                rank,
                &TwoOrbitCoeffData {
                    u0: one.clone(),
                    second_vertex: one.clone(),
                    iwahori: one.clone(),
                    i_0: id.clone(),
                    i_h: id.clone(),
                    loop_data: vec![(one, id.clone(), id.clone()); k],
                },
            )
            .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            Ok(document::document_from_recipe(&inst, vec![note]))
        }
        Family::Gl => {
            if rank < 2 {
                return Err(Failure::new(Code::Parse, "--rank must be at least 2"));
            }
            let k = rank / 2;
            let (inst, _) = gl_instance(
                rank,
                &CentralCoeffData {
                    u0: one.clone(),
                    iwahori: one.clone(),
                    i_0: id.clone(),
                    loop_data: vec![(one, id.clone(), id.clone()); k],
                },
            )
            .map_err(|e| Failure::new(Code::Internal, e.to_string()))?;
            Ok(document::document_from_central(&inst, vec![note]))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error[{}]: {}", f.code.name(), f.message);
            std::process::exit(f.code.exit_code());
        }
    }
}
