//! Command-line surface and dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use contracta::filter::SpectrumReport;
use contracta::lattice::{ElementId, FiniteSemilattice};
use contracta::semigroup::{condition_iii_search, ActionError, FiniteInverseSemigroup, StandardAction};
use contracta::symbolic::oracle::{verify_witness_by_truncation, witness_depth};
use contracta::symbolic::{
    find_contracting_block, find_strictly_contracting_block, incidence_matrix, BlockOracle, BlockSystem,
    SearchConfig, SearchError, SearchRun, Word, DEFAULT_IMAGE_BUDGET,
};
use serde_json::{json, Value};

use crate::document::{parse, Kind, Validated};
use crate::report::{one_based, InputInfo, Report, Verdict};

#[derive(Debug, Clone, Parser)]
#[command(name = "contracta", version, about = "Contraction checks for semilattices, inverse semigroups and cylinder maps")]
pub struct Cli {
    /// Extend an INVSGP table by a new absorbing zero.
    #[arg(long, global = true)]
    pub adjoin_zero: bool,
    /// Fill in elapsed_ms (reports are otherwise reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Order-theoretic properties of a semilattice or of the idempotents of
    /// a semigroup; shape of a block system.
    Props { file: PathBuf },
    /// Tight filters, ultrafilters and atoms, side by side.
    Spectrum { file: PathBuf },
    /// The action of one element on the spectrum and the images of basic
    /// sets.
    Action {
        #[arg(long)]
        element: usize,
        file: PathBuf,
    },
    /// Exhaustive search for an idempotent-wise contraction witness.
    ConditionIii { file: PathBuf },
    /// Contracting blocks of a cylinder map: search or check a single claim.
    #[command(subcommand)]
    Blocks(BlocksCommand),
}

#[derive(Debug, Clone, Subcommand)]
pub enum BlocksCommand {
    /// Search for a block X and power m with f^m(X) inside X.
    Find {
        /// Require a proper inclusion and report a separating cylinder.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = SearchConfig::default().max_power)]
        max_power: u64,
        /// Limit on the size of iterated images.
        #[arg(long, default_value_t = DEFAULT_IMAGE_BUDGET)]
        budget: usize,
        /// Check the standing assumption at every power up to this bound
        /// first.
        #[arg(long)]
        sweep: Option<u64>,
        file: PathBuf,
    },
    /// Check f^m(X_i) inside X_i symbolically and by truncation.
    Verify {
        /// Block number, starting at 1.
        #[arg(long)]
        block: usize,
        #[arg(long)]
        power: u64,
        /// Truncation depth; defaults to the smallest depth that decides.
        #[arg(long)]
        oracle_depth: Option<usize>,
        file: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Props { .. } => "props",
            Command::Spectrum { .. } => "spectrum",
            Command::Action { .. } => "action",
            Command::ConditionIii { .. } => "condition-iii",
            Command::Blocks(BlocksCommand::Find { .. }) => "blocks find",
            Command::Blocks(BlocksCommand::Verify { .. }) => "blocks verify",
        }
    }

    pub fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Props { file }
            | Command::Spectrum { file }
            | Command::Action { file, .. }
            | Command::ConditionIii { file }
            | Command::Blocks(BlocksCommand::Find { file, .. })
            | Command::Blocks(BlocksCommand::Verify { file, .. }) => file,
        }
    }
}

/// Reads the command's file and runs it.
pub fn execute(cli: &Cli) -> Report {
    match std::fs::read(cli.command.file()) {
        Ok(bytes) => run(cli, &bytes),
        Err(e) => Report::failed(
            cli.command.name(),
            InputInfo::new(None, b""),
            Verdict::IoError,
            format!("{}: {e}", cli.command.file().display()),
        ),
    }
}

/// Runs the command on the given input bytes.
pub fn run(cli: &Cli, bytes: &[u8]) -> Report {
    let name = cli.command.name();
    let Ok(text) = std::str::from_utf8(bytes) else {
        return Report::failed(name, InputInfo::new(None, bytes), Verdict::SyntaxError, "input is not UTF-8");
    };
    let parsed = match parse(text) {
        Ok(p) => p,
        Err(e) => return Report::failed(name, InputInfo::new(None, bytes), Verdict::SyntaxError, e),
    };
    let input = InputInfo::new(Some(parsed.document.kind()), bytes);
    let validated = match parsed.validate(cli.adjoin_zero) {
        Ok(v) => v,
        Err(e) => return Report::failed(name, input, Verdict::ValidationError, e),
    };
    let start = Instant::now();
    let mut report = dispatch(&cli.command, &validated, Report::new(name, input.clone(), Verdict::Pass));
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

fn dispatch(command: &Command, doc: &Validated, mut report: Report) -> Report {
    let mismatch = |report: Report, wanted: &str| {
        let kind = report.input.kind.map_or("unknown", Kind::keyword);
        let message = format!("{} needs {wanted}, got {kind}", report.command);
        Report::failed(&report.command, report.input, Verdict::KindMismatch, message)
    };
    match (command, doc) {
        (Command::Validate { .. }, _) => {
            report.verdict = Verdict::Valid;
            if let Validated::Blocks { system, redundant } = doc {
                let words: Vec<String> = redundant.iter().map(|w| system.alphabet().format_word(w)).collect();
                report.witnesses.push(json!({ "redundant_words": words }));
            }
            report
        }
        (Command::Props { .. }, Validated::Semilattice(l)) => {
            report.witnesses.push(lattice_props(l, &|e| e.index()));
            report
        }
        (Command::Props { .. }, Validated::InverseSemigroup(s)) => {
            report.witnesses.push(semigroup_props(s));
            report
        }
        (Command::Props { .. }, Validated::Blocks { system, .. }) => {
            report.witnesses.push(block_props(system));
            report
        }
        (Command::Spectrum { .. }, Validated::Semilattice(l)) => spectrum(report, l, &|e| e.index()),
        (Command::Spectrum { .. }, Validated::InverseSemigroup(s)) => {
            let idem = s.idempotent_semilattice();
            spectrum(report, &idem.lattice, &|e| idem.element(e))
        }
        (Command::Action { element, .. }, Validated::InverseSemigroup(s)) => action(report, s, *element),
        (Command::ConditionIii { .. }, Validated::InverseSemigroup(s)) => condition_iii(report, s),
        (Command::Blocks(BlocksCommand::Find { strict, max_power, budget, sweep, .. }), Validated::Blocks { system, .. }) => {
            let config = SearchConfig { max_power: *max_power, hypothesis_sweep: *sweep };
            blocks_find(report, system, *strict, &config, *budget)
        }
        (Command::Blocks(BlocksCommand::Verify { block, power, oracle_depth, .. }), Validated::Blocks { system, .. }) => {
            blocks_verify(report, system, *block, *power, *oracle_depth)
        }
        (Command::Spectrum { .. }, _) => mismatch(report, "SEMILATTICE or INVSGP"),
        (Command::Action { .. } | Command::ConditionIii { .. }, _) => mismatch(report, "INVSGP"),
        (Command::Blocks(_), _) => mismatch(report, "BLOCKS"),
    }
}

fn lattice_props(l: &FiniteSemilattice, label: &dyn Fn(ElementId) -> usize) -> Value {
    let mut dominations = Vec::new();
    for e in l.elements() {
        for f in l.elements() {
            if let Some(d) = l.strictly_dominated_by(e, f) {
                dominations.push(json!({ "e": label(e), "f": label(f), "d": label(d) }));
            }
        }
    }
    json!({
        "size": l.size(),
        "tree_like": l.is_tree_like(),
        "tree_like_counterexample": l.tree_like_counterexample().map(|(e, f)| [label(e), label(f)]),
        "atoms": l.atoms().into_iter().map(label).collect::<Vec<_>>(),
        "dominations": dominations,
    })
}

fn semigroup_props(s: &FiniteInverseSemigroup) -> Value {
    let idem = s.idempotent_semilattice();
    let mut idempotents = s.idempotents();
    idempotents.sort_unstable();
    json!({
        "size": s.size(),
        "zero": s.zero(),
        "idempotents": idempotents,
        "inverses": (0..s.size()).map(|x| s.star(x)).collect::<Vec<_>>(),
        "idempotent_semilattice": lattice_props(&idem.lattice, &|e| idem.element(e)),
    })
}

fn words(system: &BlockSystem, list: impl IntoIterator<Item = Word>) -> Vec<String> {
    list.into_iter().map(|w| system.alphabet().format_word(&w)).collect()
}

fn block_props(system: &BlockSystem) -> Value {
    let blocks: Vec<Value> = (0..system.block_count())
        .map(|i| {
            json!({
                "block": i + 1,
                "name": system.block_name(i),
                "words": words(system, system.block(i).words().cloned()),
            })
        })
        .collect();
    let incidence = match incidence_matrix(&mut system.oracle(), 1) {
        Ok(m) => json!(m.entries),
        Err(e) => json!(e.to_string()),
    };
    json!({
        "alphabet": system.alphabet().letters(),
        "universe": words(system, system.universe().words().cloned()),
        "blocks": blocks,
        "surjective": system.is_surjective(),
        "max_word_len": system.max_word_len(),
        "max_rewrite_growth": system.map().max_rewrite_growth(),
        "incidence_1": incidence,
    })
}

fn spectrum(mut report: Report, lattice: &FiniteSemilattice, label: &dyn Fn(ElementId) -> usize) -> Report {
    let spectra = SpectrumReport::compute(lattice);
    let labels = |ids: &[ElementId]| ids.iter().map(|&e| label(e)).collect::<Vec<_>>();
    report.verdict = if spectra.coincide() { Verdict::Pass } else { Verdict::Violation };
    report.witnesses.push(json!({
        "tight": labels(&spectra.tight),
        "ultra": labels(&spectra.ultra),
        "atoms": labels(&spectra.atoms),
        "coincide": spectra.coincide(),
    }));
    report
}

fn action(mut report: Report, s: &FiniteInverseSemigroup, element: usize) -> Report {
    let action = StandardAction::new(s);
    let idem = action.idempotents().clone();
    let gens = |points: &[contracta::filter::SpectrumPoint]| {
        points.iter().map(|p| idem.element(p.generator())).collect::<Vec<_>>()
    };
    let view = match action.view(element) {
        Ok(v) => v,
        Err(e) => return Report::failed(&report.command, report.input, Verdict::UsageError, e),
    };
    let mapping: Vec<[usize; 2]> = view
        .mapping
        .iter()
        .map(|(x, y)| [idem.element(x.generator()), idem.element(y.generator())])
        .collect();
    report.witnesses.push(json!({
        "element": element,
        "source": s.source(element),
        "range": s.range(element),
        "domain": gens(&view.domain),
        "mapping": mapping,
        "injective": view.is_injective(),
    }));
    let mut idempotents = s.idempotents();
    idempotents.sort_unstable();
    let mut ok = view.is_injective();
    for e in idempotents {
        let expected = action.domain_set(s.conjugate(element, e)).expect("conjugates of idempotents are idempotent");
        for (path, result) in [
            ("below", action.image_of_domain_below(element, e)),
            ("contained", action.image_of_domain_contained(element, e)),
        ] {
            let entry = match result {
                Ok(image) => {
                    let agrees = image == expected;
                    ok &= agrees;
                    json!({ "e": e, "path": path, "image": gens(&image), "expected": gens(&expected), "agrees": agrees })
                }
                Err(ActionError::NotBelowSourceProjection { .. } | ActionError::DomainViolation { .. }) => continue,
                Err(err) => {
                    ok = false;
                    json!({ "e": e, "path": path, "error": err.to_string() })
                }
            };
            report.trace.push(entry);
        }
    }
    report.verdict = if ok { Verdict::Pass } else { Verdict::Violation };
    report
}

fn condition_iii(mut report: Report, s: &FiniteInverseSemigroup) -> Report {
    let result = condition_iii_search(s);
    report.witnesses = result.witnesses().map(|w| json!(w)).collect();
    report.trace = result
        .per_idempotent
        .iter()
        .map(|(e, w)| json!({ "e": e, "witness": w }))
        .collect();
    report.verdict = if result.holds() { Verdict::Found } else { Verdict::NotFound };
    report
}

fn search_failure(report: &mut Report, error: &SearchError) {
    report.verdict = match error {
        SearchError::Violation(v) => {
            report.witnesses.push(one_based(json!(v)));
            Verdict::Violation
        }
        SearchError::Exhausted { .. } | SearchError::Budget { .. } => Verdict::Exhausted,
        SearchError::NotApplicable => Verdict::NotApplicable,
        SearchError::Oracle(_) => Verdict::Violation,
    };
    report.error = Some(error.to_string());
}

fn blocks_find(mut report: Report, system: &BlockSystem, strict: bool, config: &SearchConfig, budget: usize) -> Report {
    let mut oracle = system.oracle().with_budget(budget);
    let SearchRun { outcome, trace } = if strict {
        find_strictly_contracting_block(&mut oracle, config)
    } else {
        find_contracting_block(&mut oracle, config)
    };
    report.trace = trace.steps.iter().map(|s| one_based(json!(s))).collect();
    report.trace.extend(trace.loops.iter().map(|l| {
        let mut v = one_based(json!(l));
        v["case"] = json!("Loop");
        v
    }));
    match outcome {
        Ok(w) => {
            report.verdict = Verdict::Witness;
            report.witnesses.push(json!({
                "block": w.block + 1,
                "name": system.block_name(w.block),
                "power": w.power,
                "strict": w.strict,
                "separator": w.separator.map(|d| system.alphabet().format_word(&d)),
            }));
        }
        Err(e) => search_failure(&mut report, &e),
    }
    report
}

fn blocks_verify(mut report: Report, system: &BlockSystem, block: usize, power: u64, depth: Option<usize>) -> Report {
    if block == 0 || block > system.block_count() {
        let message = format!("block {block} out of range 1..={}", system.block_count());
        return Report::failed(&report.command, report.input, Verdict::UsageError, message);
    }
    let i = block - 1;
    let mut oracle = system.oracle();
    let image = match oracle.block_image(i, power) {
        Ok(image) => image,
        Err(e) => {
            search_failure(&mut report, &e.into());
            return report;
        }
    };
    let own = system.block(i);
    let contained = image.is_subset(own);
    let separator = oracle.separator(own, &image);
    let depth = depth.unwrap_or_else(|| witness_depth(system, power));
    let truncation = match verify_witness_by_truncation(system, i, power, separator.as_ref(), depth) {
        Ok(t) => t,
        Err(e) => return Report::failed(&report.command, report.input, Verdict::UsageError, e),
    };
    report.witnesses.push(json!({
        "block": block,
        "name": system.block_name(i),
        "power": power,
        "image": words(system, image.words().cloned()),
        "contained": contained,
        "strict": contained && separator.is_some(),
        "separator": separator.map(|d| system.alphabet().format_word(&d)),
        "truncation": truncation,
    }));
    report.verdict = if contained != truncation.contained || !truncation.holds() && contained {
        Verdict::Violation
    } else if contained {
        Verdict::Pass
    } else {
        Verdict::NotFound
    };
    report
}
