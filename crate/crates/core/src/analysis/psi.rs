use crate::polynomial::Assignment;

use super::{AnalysisError, CallRecord};

/// Maps an assignment of the caller, analyzed with the call rule, to the
/// matching assignment of the caller with the call inlined.
///
/// The value chosen at the call (or 0 when the call allocated no position)
/// selects a summary vector; its recorded callee assignment takes the place
/// of the call's position, and every later position shifts accordingly.
pub fn map_assignment_psi(
    a: &Assignment,
    site: &CallRecord,
    callee_assignments: &[Assignment],
) -> Result<Assignment, AnalysisError> {
    let tag = site.position.map_or(0, |q| a.get(q));
    let block = callee_assignments.get(tag).ok_or(AnalysisError::TagOutOfRange {
        tag,
        k: callee_assignments.len(),
    })?;
    let skip = usize::from(site.position.is_some());
    let start = site.first_position;
    let mut out = Vec::with_capacity(a.len() - skip + block.len());
    out.extend_from_slice(&a.choices[..start]);
    out.extend_from_slice(&block.choices);
    out.extend_from_slice(&a.choices[start + skip..]);
    Ok(Assignment::new(out))
}
