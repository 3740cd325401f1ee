//! Problem files: one TOML document with a ring, named modules,
//! filtrations and sequences.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use mcmlab::sequence::cosyzygy;
use mcmlab::{Field, Filtration, Module, PolyMatrix, Polynomial, Ring, ShortExactSequence};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ring: RingBlock,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleBlock>,
    #[serde(default)]
    pub filtrations: BTreeMap<String, FiltrationBlock>,
    #[serde(default)]
    pub sequences: BTreeMap<String, SequenceBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub field: Option<u64>,
    pub weights: Option<Vec<u32>>,
    pub gorenstein: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub level: Option<u32>,
    pub window: Option<String>,
    pub cap_dim: Option<usize>,
}

type Rows = Vec<Vec<String>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MfBlock {
    pub phi: Rows,
    pub psi: Rows,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub presentation: Option<Rows>,
    pub mf: Option<MfBlock>,
    pub free: Option<usize>,
    pub expect: Option<toml::Table>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationBlock {
    pub kind: String,
    pub ideal: Option<Vec<String>>,
    pub table: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceBlock {
    pub kind: String,
    pub n: Option<String>,
    pub e: Option<String>,
    pub m: Option<String>,
    pub w: Option<Rows>,
    pub inject: Option<Rows>,
    pub project: Option<Rows>,
    pub expect: Option<toml::Table>,
}

/// Raw file text with its parsed document.
pub struct Source {
    pub path: PathBuf,
    pub text: String,
    pub doc: ProblemFile,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let doc: ProblemFile =
            toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.to_string().trim_end())))?;
        Ok(Source {
            path: path.to_path_buf(),
            text,
            doc,
        })
    }

    /// `file:line` of a table header such as `[modules.M]`, for messages.
    pub fn locate(&self, section: &str, name: &str) -> String {
        let header = format!("[{section}.{name}");
        let line = self
            .text
            .lines()
            .position(|l| l.trim_start().starts_with(&header))
            .or_else(|| self.text.lines().position(|l| l.trim_start().starts_with(&format!("[{section}"))))
            .map(|i| i + 1)
            .unwrap_or(1);
        format!("{}:{line}", self.path.display())
    }

    pub fn characteristic(&self) -> u64 {
        self.doc.ring.field.unwrap_or(32003)
    }
}

/// A problem with everything parsed over the field `K`.
pub struct Problem<K: Field> {
    pub ring: Arc<Ring<K>>,
    pub modules: BTreeMap<String, Module<K>>,
    pub filtrations: BTreeMap<String, Filtration<K>>,
    pub sequences: BTreeMap<String, ShortExactSequence<K>>,
    pub module_expect: BTreeMap<String, toml::Table>,
    pub sequence_expect: BTreeMap<String, toml::Table>,
}

fn parse_rows<K: Field>(rows: &Rows, names: &[String], place: &str) -> Result<PolyMatrix<K>, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Input(format!("{place}: rows have different lengths")));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| {
                    Polynomial::parse(s, names)
                        .map_err(|e| CliError::Input(format!("{place}, entry ({}, {}): {e}", i + 1, j + 1)))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix::from_rows(parsed, ncols)?)
}

fn parse_list<K: Field>(items: &[String], names: &[String], place: &str) -> Result<Vec<Polynomial<K>>, CliError> {
    items
        .iter()
        .map(|s| Polynomial::parse(s, names).map_err(|e| CliError::Input(format!("{place}: `{s}`: {e}"))))
        .collect()
}

impl<K: Field> Problem<K> {
    pub fn build(src: &Source) -> Result<Self, CliError> {
        let doc = &src.doc;
        let names = doc.ring.vars.clone();
        if names.iter().any(|n| n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')) {
            return Err(CliError::Input(format!("{}: invalid variable name", src.locate("ring", ""))));
        }
        let here = |s: &str, n: &str| src.locate(s, n);
        let relations = parse_list::<K>(&doc.ring.relations, &names, &here("ring", ""))?;

        // matrices first, so that their entries can steer the grading search
        let mut module_mats = BTreeMap::new();
        for (name, b) in &doc.modules {
            let place = format!("{} (module {name})", here("modules", name));
            let given = [b.presentation.is_some(), b.mf.is_some(), b.free.is_some()];
            if given.iter().filter(|&&g| g).count() != 1 {
                return Err(CliError::Input(format!(
                    "{place}: give exactly one of `presentation`, `mf`, `free`"
                )));
            }
            let mats = match (&b.presentation, &b.mf, b.free) {
                (Some(p), _, _) => (Some(parse_rows::<K>(p, &names, &place)?), None, None),
                (_, Some(mf), _) => (
                    Some(parse_rows::<K>(&mf.phi, &names, &format!("{place}, phi"))?),
                    Some(parse_rows::<K>(&mf.psi, &names, &format!("{place}, psi"))?),
                    None,
                ),
                (_, _, Some(r)) => (None, None, Some(r)),
                _ => unreachable!(),
            };
            module_mats.insert(name.clone(), mats);
        }
        let mut hints: Vec<Polynomial<K>> = Vec::new();
        for (phi, psi, _) in module_mats.values() {
            for m in [phi, psi].into_iter().flatten() {
                hints.extend(m.entries().map(|(_, _, p)| p.clone()));
            }
        }
        let mut ring = Ring::with_hints(names.clone(), relations, &hints)?;
        if let Some(w) = &doc.ring.weights {
            ring = ring.with_weights(w.clone())?;
        }
        if doc.ring.gorenstein == Some(false) {
            ring = ring.without_gorenstein();
        }
        ring.validate()?;

        let mut modules = BTreeMap::new();
        for (name, (phi, psi, free)) in module_mats {
            let place = format!("{} (module {name})", here("modules", &name));
            let m = match (phi, psi, free) {
                (Some(phi), Some(psi), _) => Module::matrix_factorization(&ring, phi, psi)
                    .map_err(|e| CliError::Input(format!("{place}: {e}")))?,
                (Some(phi), None, _) => Module::presentation(&ring, phi),
                (None, _, Some(r)) => Module::free(&ring, r),
                _ => unreachable!(),
            };
            modules.insert(name, m);
        }

        let mut filtrations = BTreeMap::new();
        for (name, b) in &doc.filtrations {
            let place = format!("{} (filtration {name})", here("filtrations", name));
            let ideal = match &b.ideal {
                Some(i) => parse_list::<K>(i, &names, &place)?,
                None => (0..names.len()).map(|i| ring.variable(i)).collect(),
            };
            let f = match b.kind.as_str() {
                "adic" => Filtration::adic(&ring, ideal),
                "maximal" | "madic" => Ok(Filtration::maximal(&ring)),
                "integral-closure" => Filtration::integral_closure(&ring, ideal),
                "custom" => {
                    let table = b
                        .table
                        .as_ref()
                        .ok_or_else(|| CliError::Input(format!("{place}: custom filtrations need `table`")))?
                        .iter()
                        .map(|row| parse_list::<K>(row, &names, &place))
                        .collect::<Result<Vec<_>, _>>()?;
                    Filtration::custom(&ring, ideal, table)
                }
                other => {
                    return Err(CliError::Input(format!(
                        "{place}: unknown kind `{other}` (expected adic, maximal, integral-closure or custom)"
                    )))
                }
            }
            .map_err(|e| CliError::Input(format!("{place}: {e}")))?;
            filtrations.insert(name.clone(), f);
        }

        let mut sequences = BTreeMap::new();
        for (name, b) in &doc.sequences {
            let place = format!("{} (sequence {name})", here("sequences", name));
            let get = |field: &Option<String>, role: &str| -> Result<&Module<K>, CliError> {
                let key = field
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("{place}: missing `{role}`")))?;
                modules
                    .get(key)
                    .ok_or_else(|| CliError::Input(format!("{place}: unknown module `{key}`")))
            };
            let rows = |field: &Option<Rows>, role: &str| -> Result<PolyMatrix<K>, CliError> {
                let r = field
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("{place}: missing `{role}`")))?;
                parse_rows::<K>(r, &names, &format!("{place}, {role}"))
            };
            let s = match b.kind.as_str() {
                "split" => ShortExactSequence::split(get(&b.n, "n")?, get(&b.m, "m")?),
                "standard" => ShortExactSequence::standard(get(&b.n, "n")?, get(&b.m, "m")?, rows(&b.w, "w")?),
                "maps" => ShortExactSequence::from_maps(
                    get(&b.n, "n")?,
                    get(&b.e, "e")?,
                    get(&b.m, "m")?,
                    rows(&b.inject, "inject")?,
                    rows(&b.project, "project")?,
                ),
                "cosyzygy" => cosyzygy(get(&b.m, "m")?).map(|(_, s)| s),
                other => {
                    return Err(CliError::Input(format!(
                        "{place}: unknown kind `{other}` (expected split, standard, maps or cosyzygy)"
                    )))
                }
            }
            .map_err(|e| CliError::Input(format!("{place}: {e}")))?;
            sequences.insert(name.clone(), s);
        }

        let module_expect = doc
            .modules
            .iter()
            .filter_map(|(n, b)| b.expect.clone().map(|e| (n.clone(), e)))
            .collect();
        let sequence_expect = doc
            .sequences
            .iter()
            .filter_map(|(n, b)| b.expect.clone().map(|e| (n.clone(), e)))
            .collect();
        Ok(Problem {
            ring,
            modules,
            filtrations,
            sequences,
            module_expect,
            sequence_expect,
        })
    }

    /// A named module; `A` is the ring itself unless defined in the file.
    pub fn module(&self, name: &str) -> Result<Module<K>, CliError> {
        match self.modules.get(name) {
            Some(m) => Ok(m.clone()),
            None if name == "A" => Ok(Module::free(&self.ring, 1)),
            None => Err(CliError::Input(format!("unknown module `{name}`"))),
        }
    }

    /// A named filtration; `madic` is the maximal-ideal-adic filtration
    /// unless defined in the file.
    pub fn filtration(&self, name: &str) -> Result<Filtration<K>, CliError> {
        match self.filtrations.get(name) {
            Some(f) => Ok(f.clone()),
            None if name == "madic" => Ok(Filtration::maximal(&self.ring)),
            None => Err(CliError::Input(format!("unknown filtration `{name}`"))),
        }
    }

    pub fn sequence(&self, name: &str) -> Result<&ShortExactSequence<K>, CliError> {
        self.sequences
            .get(name)
            .ok_or_else(|| CliError::Input(format!("unknown sequence `{name}`")))
    }
}
