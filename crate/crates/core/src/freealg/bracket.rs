use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Element;

/// [a, b]_v = ab − v·ba.
pub fn bracket(a: &Element, b: &Element, v: &Scalar) -> Element {
    let mut out = a.mul_ref(b);
    out.add_scaled(&b.mul_ref(a), &-v);
    out
}

/// Right-nested [b_1, …, b_n]_{v_1⋯v_{n−1}} = [b_1, [b_2, …, b_n]_{v_1⋯v_{n−2}}]_{v_{n−1}};
/// v_1 belongs to the innermost pair.
pub fn nested_bracket(items: &[Element], vs: &[Scalar]) -> Result<Element> {
    check_lengths(items, vs)?;
    let n = items.len();
    let mut acc = items[n - 1].clone();
    for k in (0..n - 1).rev() {
        acc = bracket(&items[k], &acc, &vs[n - 2 - k]);
    }
    Ok(acc)
}

/// Left-nested [b_1, …, b_n]'_{v_1⋯v_{n−1}} = [[b_1, …, b_{n−1}]'_{v_1⋯v_{n−2}}, b_n]_{v_{n−1}}.
pub fn nested_bracket_primed(items: &[Element], vs: &[Scalar]) -> Result<Element> {
    check_lengths(items, vs)?;
    let mut acc = items[0].clone();
    for (k, b) in items.iter().enumerate().skip(1) {
        acc = bracket(&acc, b, &vs[k - 1]);
    }
    Ok(acc)
}

fn check_lengths(items: &[Element], vs: &[Scalar]) -> Result<()> {
    if items.is_empty() || vs.len() + 1 != items.len() {
        return Err(Error::InvalidParams(format!(
            "nested bracket of {} items needs {} parameters, got {}",
            items.len(),
            items.len().saturating_sub(1),
            vs.len()
        )));
    }
    Ok(())
}
