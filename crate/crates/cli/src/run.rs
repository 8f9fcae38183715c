use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use tyclass::grassmann::{schubert_ty, GrassmannModel, SchubertClass, Space};
use tyclass::loci::{csm_resolution_class, resolution_class, AbstractModel, Family, LocusSpec, Model};
use tyclass::orbit::{orbit_fundamental_class, orbit_motivic_class, FlagModel, Group, Involution, Refinement};
use tyclass::partition::Partition;
use tyclass::ring::parse_rat;
use tyclass::strata::{motivic_class_of_locus, strata_expansion};
use tyclass::{Poly, Rational, YPoly};

use crate::job::{JobSpec, ModelKind, Task};
use crate::CliError;

/// One output coefficient. `coeff` lists the coefficients of `1, y, y^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub section: String,
    pub degree: i64,
    pub label: String,
    pub coeff: YPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub job: JobSpec,
    pub terms: Vec<Term>,
    pub diagnostics: Vec<String>,
    /// Wall-clock seconds per phase; only filled on request since it breaks
    /// byte-for-byte reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<(String, f64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorObject {
    pub exit_code: i32,
    pub kind: String,
    pub message: String,
}

impl From<&CliError> for ErrorObject {
    fn from(e: &CliError) -> ErrorObject {
        ErrorObject { exit_code: e.exit_code(), kind: e.kind(), message: e.to_string() }
    }
}

/// Everything besides the job that affects how (not what) is computed.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
}

struct Out {
    sections: Vec<(String, Vec<Term>)>,
    diagnostics: Vec<String>,
    y: Option<Rational>,
}

impl Out {
    fn push(&mut self, section: &str, degree: i64, label: String, coeff: YPoly) {
        let coeff = match &self.y {
            Some(y) => YPoly::constant(coeff.eval(y)),
            None => coeff,
        };
        if coeff.is_zero() {
            return;
        }
        let term = Term { section: section.to_string(), degree, label, coeff };
        match self.sections.iter_mut().find(|(s, _)| s == section) {
            Some((_, v)) => v.push(term),
            None => self.sections.push((section.to_string(), vec![term])),
        }
    }

    fn poly(&mut self, section: &str, p: &Poly, iy: Option<usize>) {
        let ring = p.ring().clone();
        let split = match iy {
            Some(i) => p.split_y(i),
            None => p.terms().map(|(m, c)| (m.exps.clone(), YPoly::constant(c.clone()))).collect(),
        };
        for (exps, c) in split {
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { ring.names()[i].clone() } else { format!("{}^{e}", ring.names()[i]) })
                .collect();
            let label = if vars.is_empty() { "1".to_string() } else { vars.join("*") };
            self.push(section, ring.degree_of(&exps) as i64, label, c);
        }
    }

    fn schubert(&mut self, section: &str, c: &SchubertClass) {
        for (mu, v) in c.ordered() {
            self.push(section, mu.size(), mu.to_string(), v);
        }
    }
}

fn family(job: &JobSpec) -> Family {
    if job.family.as_deref() == Some("B") {
        Family::B
    } else {
        Family::C
    }
}

fn locus(job: &JobSpec) -> Result<LocusSpec, CliError> {
    Ok(LocusSpec::new(family(job), job.n.unwrap(), job.p.unwrap(), job.q.clone().unwrap())?)
}

fn space(job: &JobSpec) -> Result<Space, CliError> {
    let n = job.n.unwrap();
    if n < 1 {
        return Err(CliError::Usage(format!("n = {n} must be positive")));
    }
    let lg = match (job.model, job.space.as_deref(), job.family.as_deref()) {
        (Some(ModelKind::Lg), _, _) | (_, Some("lg"), _) => true,
        (Some(ModelKind::Og), _, _) | (_, Some("og"), _) => false,
        (_, _, fam) => fam != Some("B"),
    };
    Ok(if lg { Space::Lagrangian(n) } else { Space::OddOrthogonal(n) })
}

fn grassmann(job: &JobSpec, settings: &Settings, y: Option<Rational>) -> Result<GrassmannModel, CliError> {
    let sp = space(job)?;
    let m = GrassmannModel::with_trunc(sp, job.truncation.unwrap_or(sp.dim()), y);
    Ok(match &settings.cache_dir {
        Some(d) => m.with_cache_dir(d),
        None => m,
    })
}

/// Runs a job that has been through [`JobSpec::normalize`].
pub fn run(job: JobSpec, settings: &Settings) -> Result<ResultDocument, CliError> {
    let task = job.task.ok_or_else(|| CliError::Usage("no task given".into()))?;
    let y = job.y_eval.as_deref().map(parse_rat).transpose()?;
    let mut out = Out { sections: Vec::new(), diagnostics: Vec::new(), y: y.clone() };
    let mut timings = Vec::new();
    let start = Instant::now();
    let model = job.model.unwrap_or(ModelKind::Abstract);

    match task {
        Task::Strata => {
            let spec = locus(&job)?;
            let (terms, dropped) = strata_expansion(&spec);
            for t in terms {
                let label = format!("k={:?} lambda+={}", t.kseq.0, t.lambda_plus);
                out.push("strata", t.kseq.kbar(), label, t.weight);
            }
            out.diagnostics.extend(dropped.into_iter().map(|d| format!("dropped empty stratum: {d}")));
        }
        Task::ResolutionClass => {
            let spec = locus(&job)?;
            match model {
                ModelKind::Abstract => {
                    let m = AbstractModel::for_spec(&spec, job.truncation.unwrap(), y.clone());
                    out.poly("resolution", &resolution_class(&spec, &m)?, m.iy());
                }
                _ => {
                    let m = grassmann(&job, settings, y.clone())?;
                    let c = resolution_class(&spec, &m)?;
                    out.schubert("resolution", &m.to_schubert_basis(&c)?);
                    out.schubert("capped", &m.to_schubert_basis(&c.mul(&m.ty_ambient_poly()))?);
                }
            }
        }
        Task::MotivicClass => {
            let spec = locus(&job)?;
            let ex = motivic_class_of_locus(&spec)?;
            timings.push(("strata".to_string(), start.elapsed().as_secs_f64()));
            for t in &ex.terms {
                out.push("expansion", t.lambda.size(), format!("{} q={:?}", t.lambda, t.spec.q), t.coeff.clone());
            }
            out.diagnostics.extend(ex.diagnostics.iter().cloned());
            if matches!(model, ModelKind::Lg | ModelKind::Og) {
                let m = grassmann(&job, settings, y.clone())?;
                let c = ex.evaluate(&m)?;
                out.schubert("uncapped", &m.to_schubert_basis(&c)?);
                out.schubert("capped", &m.to_schubert_basis(&c.mul(&m.ty_ambient_poly()))?);
            }
        }
        Task::Csm => {
            let spec = locus(&job)?;
            let minus_one = Rational::from_integer((-1).into());
            match model {
                ModelKind::Abstract => {
                    let m = AbstractModel::for_spec(&spec, job.truncation.unwrap(), Some(minus_one));
                    out.poly("resolution", &csm_resolution_class(&spec, &m)?, None);
                }
                _ => {
                    let m = grassmann(&job, settings, Some(minus_one))?;
                    let r = schubert_ty(&m, &spec.lambda())?;
                    out.schubert("uncapped", &r.uncapped);
                    out.schubert("capped", &r.capped);
                    out.diagnostics.extend(r.diagnostics);
                }
            }
        }
        Task::SchubertCsm => {
            let lam = Partition::new(job.lambda.clone().unwrap());
            let m = grassmann(&job, settings, y.clone())?;
            let r = schubert_ty(&m, &lam)?;
            out.schubert("uncapped", &r.uncapped);
            out.schubert("capped", &r.capped);
            out.diagnostics.extend(r.diagnostics);
        }
        Task::Orbit => {
            let group = if job.group.as_deref() == Some("Sp") { Group::Sp } else { Group::O };
            let z = Involution::new(job.z.clone().unwrap())?;
            out.diagnostics.extend(z.group_warnings(group));
            let n = z.n();
            let m = match job.truncation {
                Some(t) => FlagModel::with_trunc(n, t, y.clone()),
                None => FlagModel::new(n, y.clone()),
            };
            let refine = Refinement::default();
            let fund = orbit_fundamental_class(&z, group, &m, refine)?;
            out.poly("fundamental", &fund.poly, m.iy());
            let unc = orbit_motivic_class(&z, group, &m, refine, false)?;
            out.poly("uncapped", &unc.poly, m.iy());
            let cap = orbit_motivic_class(&z, group, &m, refine, true)?;
            out.poly("capped", &cap.poly, m.iy());
            let chi = cap.integral();
            out.push("integral", 0, "chi_y".into(), chi);
        }
        Task::ChiGenus => {
            let n = job.n.unwrap();
            let chi = if job.space.as_deref() == Some("flag") {
                if n < 1 {
                    return Err(CliError::Usage(format!("n = {n} must be positive")));
                }
                FlagModel::new(n as usize, None).ty_flag().integral()
            } else {
                grassmann(&job, settings, None)?.chi_y()
            };
            out.push("chi_y", 0, "chi_y".into(), chi);
        }
    }
    timings.push(("total".to_string(), start.elapsed().as_secs_f64()));

    let mut terms = Vec::new();
    for (_, mut v) in out.sections {
        v.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
        terms.extend(v);
    }
    Ok(ResultDocument { job, terms, diagnostics: out.diagnostics, timings: settings.timings.then_some(timings) })
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let job = serde_json::to_string(&self.job).expect("jobs serialize");
        s.push_str(&format!("job: {job}\n"));
        let mut current = None;
        for t in &self.terms {
            if current != Some(&t.section) {
                s.push_str(&format!("[{}]\n", t.section));
                current = Some(&t.section);
            }
            s.push_str(&format!("  {:>3}  {:<28}  {}\n", t.degree, t.label, t.coeff));
        }
        for d in &self.diagnostics {
            s.push_str(&format!("note: {d}\n"));
        }
        if let Some(t) = &self.timings {
            for (phase, secs) in t {
                s.push_str(&format!("time {phase}: {secs:.3}s\n"));
            }
        }
        s
    }
}
