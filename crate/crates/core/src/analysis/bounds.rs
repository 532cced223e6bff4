use crate::semiring::Coeff;

use super::AnalysisError;

/// Renders a dependency vector as `max(x⃗, p1(y⃗)) + p2(z⃗)`, where `x⃗`, `y⃗`,
/// `z⃗` are the variables graded `m`, `w` and `p`. Empty parts are left out.
pub fn render_bound(v: &[Coeff], vars: &[String]) -> Result<String, AnalysisError> {
    let pick = |c: Coeff| -> Vec<&str> {
        v.iter()
            .zip(vars)
            .filter(|(x, _)| **x == c)
            .map(|(_, n)| n.as_str())
            .collect()
    };
    if let Some(i) = v.iter().position(|c| c.is_inf()) {
        return Err(AnalysisError::ContainsInfinity {
            var: vars.get(i).cloned().unwrap_or_default(),
        });
    }
    let (xs, ys, zs) = (pick(Coeff::M), pick(Coeff::W), pick(Coeff::P));
    let p1 = (!ys.is_empty()).then(|| format!("p1({})", ys.join(", ")));
    let head = match (xs.is_empty(), p1) {
        (true, None) => None,
        (true, Some(p)) => Some(p),
        (false, None) => Some(format!("max({})", xs.join(", "))),
        (false, Some(p)) => Some(format!("max({}, {p})", xs.join(", "))),
    };
    let tail = (!zs.is_empty()).then(|| format!("p2({})", zs.join(", ")));
    Ok(match (head, tail) {
        (None, None) => "0".to_string(),
        (Some(h), None) => h,
        (None, Some(t)) => t,
        (Some(h), Some(t)) => format!("{h} + {t}"),
    })
}
