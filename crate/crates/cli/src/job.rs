use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    ResolutionClass,
    Strata,
    MotivicClass,
    Csm,
    SchubertCsm,
    Orbit,
    ChiGenus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Abstract,
    Lg,
    Og,
    Flag,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// One unit of work. Absent fields are filled in by [`JobSpec::normalize`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub task: Option<Task>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_eval: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputFormat>,
}

fn missing(task: Task, field: &str) -> CliError {
    CliError::Usage(format!("task {} needs --{field}", task_name(task)))
}

pub fn task_name(task: Task) -> &'static str {
    match task {
        Task::ResolutionClass => "resolution-class",
        Task::Strata => "strata",
        Task::MotivicClass => "motivic-class",
        Task::Csm => "csm",
        Task::SchubertCsm => "schubert-csm",
        Task::Orbit => "orbit",
        Task::ChiGenus => "chi-genus",
    }
}

impl JobSpec {
    /// Overlays every field set in `other`.
    pub fn merge(&mut self, other: JobSpec) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(task, family, space, group, n, p, q, lambda, z, model, truncation, y_eval, output);
    }

    /// Checks the fields the task needs and fills in defaults, so that the
    /// echo in the result spells out everything the run depended on.
    pub fn normalize(mut self) -> Result<JobSpec, CliError> {
        let task = self.task.ok_or_else(|| CliError::Usage("no task given".into()))?;
        if let Some(f) = &self.family {
            self.family = Some(match f.to_ascii_uppercase().as_str() {
                "B" => "B".into(),
                "C" => "C".into(),
                _ => return Err(CliError::Usage(format!("unknown family {f:?}"))),
            });
        }
        if let Some(s) = &self.space {
            let s = s.to_ascii_lowercase();
            if !["lg", "og", "flag"].contains(&s.as_str()) {
                return Err(CliError::Usage(format!("unknown space {s:?}")));
            }
            self.space = Some(s);
        }
        if let Some(g) = &self.group {
            self.group = Some(match g.to_ascii_lowercase().as_str() {
                "o" => "O".into(),
                "sp" => "Sp".into(),
                _ => return Err(CliError::Usage(format!("unknown group {g:?}"))),
            });
        }
        if let Some(y) = &self.y_eval {
            let v = tyclass::ring::parse_rat(y)?;
            self.y_eval = Some(tyclass::ring::fmt_rat(&v));
        }
        self.output.get_or_insert(OutputFormat::Text);
        match task {
            Task::ResolutionClass | Task::Strata | Task::MotivicClass | Task::Csm => {
                if self.family.is_none() {
                    self.family = match (self.space.as_deref(), self.model) {
                        (Some("lg"), _) | (_, Some(ModelKind::Lg)) => Some("C".into()),
                        (Some("og"), _) | (_, Some(ModelKind::Og)) => Some("B".into()),
                        _ => return Err(missing(task, "family")),
                    };
                }
                for (v, name) in [(self.n.is_none(), "n"), (self.q.is_none(), "q")] {
                    if v {
                        return Err(missing(task, name));
                    }
                }
                self.p.get_or_insert(1);
                if task != Task::Strata {
                    let model = *self.model.get_or_insert(ModelKind::Abstract);
                    match (model, self.family.as_deref()) {
                        (ModelKind::Flag, _) => return Err(CliError::Usage("the flag model only serves orbit tasks".into())),
                        (ModelKind::Lg, Some("B")) | (ModelKind::Og, Some("C")) => {
                            return Err(CliError::Usage("model and family disagree".into()))
                        }
                        (ModelKind::Lg | ModelKind::Og, _) if self.p != Some(1) => {
                            return Err(CliError::Usage("Grassmannian models need p = 1".into()))
                        }
                        (ModelKind::Abstract, _) if self.truncation.is_none() && task != Task::MotivicClass => {
                            return Err(CliError::Usage("the abstract model needs --truncation".into()))
                        }
                        _ => {}
                    }
                }
            }
            Task::SchubertCsm => {
                let space = self.space.clone().or_else(|| match self.family.as_deref() {
                    Some("C") => Some("lg".into()),
                    Some("B") => Some("og".into()),
                    _ => None,
                });
                match space.as_deref() {
                    Some("lg") | Some("og") => self.space = space,
                    _ => return Err(missing(task, "space (lg or og)")),
                }
                if self.n.is_none() {
                    return Err(missing(task, "n"));
                }
                if self.lambda.is_none() {
                    return Err(missing(task, "lambda"));
                }
                self.family = None;
                self.y_eval.get_or_insert_with(|| "-1/1".into());
            }
            Task::Orbit => {
                if self.group.is_none() {
                    return Err(missing(task, "group"));
                }
                let z = self.z.as_ref().ok_or_else(|| missing(task, "z"))?;
                let n = *self.n.get_or_insert(z.len() as i64);
                if n != z.len() as i64 {
                    return Err(CliError::Usage(format!("z has {} entries but n = {n}", z.len())));
                }
                match self.model.get_or_insert(ModelKind::Flag) {
                    ModelKind::Flag => {}
                    _ => return Err(CliError::Usage("orbit tasks use the flag model".into())),
                }
            }
            Task::ChiGenus => {
                if self.space.is_none() {
                    self.space = match self.family.as_deref() {
                        Some("C") => Some("lg".into()),
                        Some("B") => Some("og".into()),
                        _ => return Err(missing(task, "space")),
                    };
                }
                self.family = None;
                if self.n.is_none() {
                    return Err(missing(task, "n"));
                }
            }
        }
        Ok(self)
    }
}
