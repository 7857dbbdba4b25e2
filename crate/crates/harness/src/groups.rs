//! Transfer reports for tables read from disk and the abelian survey.

use quadnorm::transfer::{diagram_check, restricted_transfer, survey_abelian, FiniteGroup, SurveyRecord};
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub order: usize,
    pub invariants: Option<Vec<u64>>,
    pub subgroup: Vec<usize>,
    pub index: usize,
    pub hypothesis: bool,
    pub well_defined: bool,
    pub vanishes: bool,
    /// `(g, Ver(g))` for every element.
    pub images: Vec<(usize, usize)>,
    pub diagram_commutes: bool,
    pub diagram_violations: Vec<usize>,
    /// The hypothesis holds but the restricted transfer does not vanish.
    pub discrepancy: bool,
}

impl TransferReport {
    pub fn passes(&self) -> bool {
        self.diagram_commutes && !self.discrepancy
    }
}

pub fn transfer_report(group: &FiniteGroup, subgroup: &[usize]) -> Result<TransferReport> {
    let mut h = subgroup.to_vec();
    h.sort_unstable();
    h.dedup();
    let tr = restricted_transfer(group, &h)?;
    let diagram = diagram_check(group, &h)?;
    Ok(TransferReport {
        order: group.order(),
        invariants: group.invariants().map(<[u64]>::to_vec),
        index: group.order() / h.len(),
        subgroup: h,
        hypothesis: tr.hypothesis,
        well_defined: tr.well_defined_on_quotient,
        vanishes: tr.vanishes,
        images: tr.images,
        diagram_commutes: diagram.commutes,
        diagram_violations: diagram.violations,
        discrepancy: tr.hypothesis && !tr.vanishes,
    })
}

pub fn transfer_from_text(text: &str, subgroup: &[usize], cap: usize) -> Result<TransferReport> {
    let group = FiniteGroup::parse(text, cap)?;
    transfer_report(&group, subgroup)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyLine {
    pub invariants: Vec<u64>,
    pub subgroup: Vec<usize>,
    pub subgroup_order: usize,
    pub index: usize,
    pub hypothesis: bool,
    pub well_defined: bool,
    pub vanishes: bool,
    pub diagram_commutes: bool,
    pub oracle_agrees: bool,
    pub discrepancy: bool,
}

impl From<&SurveyRecord> for SurveyLine {
    fn from(r: &SurveyRecord) -> Self {
        SurveyLine {
            invariants: r.invariants.clone(),
            subgroup: r.subgroup.clone(),
            subgroup_order: r.subgroup_order,
            index: r.index,
            hypothesis: r.hypothesis,
            well_defined: r.well_defined,
            vanishes: r.vanishes,
            diagram_commutes: r.diagram_commutes,
            oracle_agrees: r.oracle_agrees,
            discrepancy: r.is_discrepancy(),
        }
    }
}

pub fn survey(max_order: u64) -> Vec<SurveyLine> {
    survey_abelian(max_order).iter().map(SurveyLine::from).collect()
}

/// Subgroup given as comma- or space-separated element indices.
pub fn parse_subgroup(text: &str) -> Result<Vec<usize>> {
    Ok(crate::config::parse_list(text)?.into_iter().map(|x| x as usize).collect())
}
