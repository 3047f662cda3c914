//! JSON instance and matching files, with agent names instead of indices.

use std::collections::HashMap;
use std::path::Path;

use capmatch::{ExtensionKind, FirmId, Instance, InstanceError, InstanceParts, Matching, WorkerId};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionName {
    #[default]
    Lex,
    Monotone,
}

impl From<ExtensionName> for ExtensionKind {
    fn from(e: ExtensionName) -> Self {
        match e {
            ExtensionName::Lex => ExtensionKind::Lexicographic,
            ExtensionName::Monotone => ExtensionKind::StronglyMonotone,
        }
    }
}

impl From<ExtensionKind> for ExtensionName {
    fn from(e: ExtensionKind) -> Self {
        match e {
            ExtensionKind::Lexicographic => ExtensionName::Lex,
            ExtensionKind::StronglyMonotone => ExtensionName::Monotone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirmEntry {
    pub name: String,
    pub capacity: usize,
    pub prefs: Vec<String>,
    #[serde(default)]
    pub extension: ExtensionName,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkerEntry {
    pub name: String,
    pub prefs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    /// Free-form tag echoed into reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub firms: Vec<FirmEntry>,
    pub workers: Vec<WorkerEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub worker: String,
    pub firm: String,
}

/// Extra keys are ignored so that `solve --trace` output can be fed back in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFile {
    pub assignments: Vec<Assignment>,
}

/// A validated instance together with the names it was read with.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: InstanceFile,
    pub instance: Instance,
    pub firm_names: Vec<String>,
    pub worker_names: Vec<String>,
    firm_index: HashMap<String, usize>,
    worker_index: HashMap<String, usize>,
}

impl Loaded {
    pub fn label(&self) -> Option<&str> {
        self.file.label.as_deref()
    }

    pub fn firm(&self, name: &str) -> Result<FirmId, CliError> {
        self.firm_index
            .get(name)
            .map(|&i| FirmId(i))
            .ok_or_else(|| CliError::usage(format!("unknown firm {name:?}")))
    }

    pub fn worker(&self, name: &str) -> Result<WorkerId, CliError> {
        self.worker_index
            .get(name)
            .map(|&i| WorkerId(i))
            .ok_or_else(|| CliError::usage(format!("unknown worker {name:?}")))
    }

    pub fn firm_name(&self, f: FirmId) -> &str {
        &self.firm_names[f.0]
    }

    pub fn worker_name(&self, w: WorkerId) -> &str {
        &self.worker_names[w.0]
    }

    pub fn matching_file(&self, mu: &Matching) -> MatchingFile {
        MatchingFile {
            assignments: mu
                .pairs()
                .map(|(w, f)| Assignment {
                    worker: self.worker_name(w).to_string(),
                    firm: self.firm_name(f).to_string(),
                })
                .collect(),
        }
    }

    pub fn matching(&self, file: &MatchingFile) -> Result<Matching, CliError> {
        let mut mu = Matching::empty_for(&self.instance);
        for a in &file.assignments {
            let w = self.worker(&a.worker)?;
            let f = self.firm(&a.firm)?;
            mu.assign(w, f)
                .map_err(|e| CliError::usage(format!("worker {:?}: {e}", a.worker)))?;
        }
        Ok(mu)
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn parse_instance(text: &str, origin: &str) -> Result<Loaded, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| json_error(origin, &e))?;
    build(file, text, origin)
}

pub fn load_instance(path: &Path) -> Result<Loaded, CliError> {
    parse_instance(&read_text(path)?, &path.display().to_string())
}

pub fn parse_matching(text: &str, origin: &str) -> Result<MatchingFile, CliError> {
    serde_json::from_str(text).map_err(|e| json_error(origin, &e))
}

pub fn load_matching(path: &Path, inst: &Loaded) -> Result<Matching, CliError> {
    let origin = path.display().to_string();
    let text = read_text(path)?;
    let file = parse_matching(&text, &origin)?;
    inst.matching(&file).map_err(|e| {
        let line = e
            .message
            .split('"')
            .nth(1)
            .and_then(|name| line_of(&text, name))
            .unwrap_or(1);
        CliError::usage(format!("{origin}:{line}: {}", e.message))
    })
}

fn json_error(origin: &str, e: &serde_json::Error) -> CliError {
    CliError::usage(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
}

/// First line mentioning `name` as a JSON string.
fn line_of(text: &str, name: &str) -> Option<usize> {
    let quoted = serde_json::to_string(name).ok()?;
    text.lines()
        .position(|l| l.contains(&quoted))
        .map(|i| i + 1)
}

/// Line declaring the agent `name`, falling back to any mention.
fn line_of_agent(text: &str, name: &str) -> Option<usize> {
    let quoted = serde_json::to_string(name).ok()?;
    let declares = |l: &str| {
        l.match_indices("\"name\"").any(|(i, key)| {
            let rest = l[i + key.len()..].trim_start();
            rest.strip_prefix(':')
                .is_some_and(|r| r.trim_start().starts_with(&quoted))
        })
    };
    text.lines()
        .position(declares)
        .map(|i| i + 1)
        .or_else(|| line_of(text, name))
}

fn index_names<'a>(
    names: impl Iterator<Item = &'a str>,
    side: &str,
    text: &str,
    origin: &str,
    errs: &mut Vec<String>,
) -> HashMap<String, usize> {
    let mut map = HashMap::new();
    for (i, name) in names.enumerate() {
        if map.insert(name.to_string(), i).is_some() {
            let line = line_of_agent(text, name).unwrap_or(1);
            errs.push(format!("{origin}:{line}: duplicate {side} name {name:?}"));
        }
    }
    map
}

fn build(file: InstanceFile, text: &str, origin: &str) -> Result<Loaded, CliError> {
    let mut errs = Vec::new();
    let firm_index = index_names(
        file.firms.iter().map(|f| f.name.as_str()),
        "firm",
        text,
        origin,
        &mut errs,
    );
    let worker_index = index_names(
        file.workers.iter().map(|w| w.name.as_str()),
        "worker",
        text,
        origin,
        &mut errs,
    );
    let mut resolve =
        |owner: &str, list: &[String], index: &HashMap<String, usize>, side: &str| -> Vec<usize> {
            let mut out = Vec::new();
            for name in list {
                match index.get(name) {
                    Some(&i) => out.push(i),
                    None => {
                        let line = line_of_agent(text, owner).unwrap_or(1);
                        errs.push(format!(
                            "{origin}:{line}: {owner:?} ranks unknown {side} {name:?}"
                        ));
                    }
                }
            }
            out
        };
    let firm_prefs: Vec<Vec<WorkerId>> = file
        .firms
        .iter()
        .map(|f| {
            resolve(&f.name, &f.prefs, &worker_index, "worker")
                .into_iter()
                .map(WorkerId)
                .collect()
        })
        .collect();
    let worker_prefs: Vec<Vec<FirmId>> = file
        .workers
        .iter()
        .map(|w| {
            resolve(&w.name, &w.prefs, &firm_index, "firm")
                .into_iter()
                .map(FirmId)
                .collect()
        })
        .collect();
    let parts = InstanceParts {
        n_firms: file.firms.len(),
        n_workers: file.workers.len(),
        capacities: file.firms.iter().map(|f| f.capacity).collect(),
        firm_prefs,
        worker_prefs,
        extensions: file.firms.iter().map(|f| f.extension.into()).collect(),
    };
    let firm_names: Vec<String> = file.firms.iter().map(|f| f.name.clone()).collect();
    let worker_names: Vec<String> = file.workers.iter().map(|w| w.name.clone()).collect();
    if errs.is_empty() {
        if let Err(list) = capmatch::validate_instance(&parts) {
            for e in list {
                if let InstanceError::DuplicateEntry { owner, entry } = e {
                    let (owner, entry) = match owner.side {
                        capmatch::Side::Firm => {
                            (&firm_names[owner.index], &worker_names[entry.index])
                        }
                        capmatch::Side::Worker => {
                            (&worker_names[owner.index], &firm_names[entry.index])
                        }
                    };
                    let line = line_of_agent(text, owner).unwrap_or(1);
                    errs.push(format!("{origin}:{line}: {owner:?} ranks {entry:?} twice"));
                } else {
                    errs.push(format!("{origin}: {e}"));
                }
            }
        }
    }
    if !errs.is_empty() {
        return Err(CliError::usage(errs.join("\n")));
    }
    let instance = Instance::new(parts).map_err(|e| CliError::usage(format!("{origin}: {e}")))?;
    Ok(Loaded {
        file,
        instance,
        firm_names,
        worker_names,
        firm_index,
        worker_index,
    })
}

/// Names `f1..`, `w1..` for instances that have none.
pub fn emit_instance(inst: &Instance, label: Option<String>) -> InstanceFile {
    let fname = |f: FirmId| format!("f{}", f.0 + 1);
    let wname = |w: WorkerId| format!("w{}", w.0 + 1);
    InstanceFile {
        label,
        firms: inst
            .firms()
            .map(|f| FirmEntry {
                name: fname(f),
                capacity: inst.capacity(f),
                prefs: inst.firm_prefs(f).iter().map(|&w| wname(w)).collect(),
                extension: inst.extension(f).into(),
            })
            .collect(),
        workers: inst
            .workers()
            .map(|w| WorkerEntry {
                name: wname(w),
                prefs: inst.worker_prefs(w).iter().map(|&f| fname(f)).collect(),
            })
            .collect(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
