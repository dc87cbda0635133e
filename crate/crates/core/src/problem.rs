use crate::dd::NodeStore;
use crate::lang::{compile, parse, validate, CheckedDomain, ExplicitModel};
use crate::planner::{self, PlannerOptions, SearchReport, Verification, VerifyMode};
use crate::symdomain::SymbolicDomain;
use crate::Error;

/// A parsed, validated and compiled planning problem with its own store.
pub struct Problem {
    pub model: CheckedDomain,
    pub store: NodeStore,
    pub domain: SymbolicDomain,
    pub explicit: ExplicitModel,
}

impl Problem {
    pub fn from_source(text: &str) -> Result<Problem, Error> {
        Problem::with_store(text, NodeStore::new())
    }

    pub fn with_store(text: &str, mut store: NodeStore) -> Result<Problem, Error> {
        let model = validate(parse(text)?)?;
        let domain = compile(&model, &mut store)?;
        let explicit = ExplicitModel::new(&model)?;
        Ok(Problem {
            model,
            store,
            domain,
            explicit,
        })
    }

    pub fn plan(&mut self, opts: &PlannerOptions) -> Result<SearchReport, Error> {
        Ok(planner::conformant_plan(&mut self.store, &mut self.domain, opts)?)
    }

    pub fn verify<S: AsRef<str>>(&mut self, plan: &[S], mode: VerifyMode) -> Result<Verification, Error> {
        Ok(planner::verify_plan(
            &mut self.store,
            &self.domain,
            &self.explicit,
            plan,
            mode,
        )?)
    }
}
