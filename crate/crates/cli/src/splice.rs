//! `g@(...)` substitution for the `--g` flag.
//!
//! `g@(e)` and `g@x` in an expression are replaced by the `--g` expression
//! with its variable bound to `e`. The result is spliced back as fully
//! parenthesised text and parsed as usual.

use anyhow::{bail, Context, Result};
use padic_ergo_core::expr::{parse, TExpr};

const MARKER: &str = "g@";

/// Expands every `g@` occurrence in `src` using `g`.
pub fn splice(src: &str, g: Option<&str>) -> Result<String> {
    if !src.contains(MARKER) {
        return Ok(src.to_string());
    }
    let g_src = g.context("expression uses g@ but no --g was given")?;
    let g = parse(g_src).with_context(|| format!("in --g expression `{g_src}`"))?;
    let var = match g.variables().as_slice() {
        [] => None,
        [v] => Some(v.clone()),
        vs => bail!("--g must be univariate, found {vs:?}"),
    };
    let mut out = String::with_capacity(src.len() * 2);
    let mut rest = src;
    while let Some(pos) = rest.find(MARKER) {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + MARKER.len()..];
        let (arg, tail) = argument(after).with_context(|| format!("after g@ at offset {}", src.len() - rest.len() + pos))?;
        let arg = parse(splice(arg, Some(g_src))?.as_str())?;
        out.push_str(&instantiate(&g, var.as_deref(), &arg).to_string());
        rest = tail;
    }
    out.push_str(rest);
    Ok(out)
}

fn instantiate(g: &TExpr, var: Option<&str>, arg: &TExpr) -> TExpr {
    match var {
        Some(v) => g.substitute(v, arg),
        None => g.clone(),
    }
}

/// Splits a balanced parenthesised group or an identifier off the front.
fn argument(s: &str) -> Result<(&str, &str)> {
    if let Some(body) = s.strip_prefix('(') {
        let mut depth = 1;
        for (i, c) in body.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((&body[..i], &body[i + 1..]));
                    }
                }
                _ => {}
            }
        }
        bail!("unbalanced parenthesis")
    }
    let end = s
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
        .map_or(s.len(), |(i, _)| i);
    if end == 0 {
        bail!("expected `(` or an identifier");
    }
    Ok((&s[..end], &s[end..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_template() {
        let s = splice("1+x+2*((g@(x+1))-(g@x))", Some("x ^ (2*x+1)")).unwrap();
        let e = parse(&s).unwrap();
        let want = parse("1+x+2*(((x+1) ^ (2*(x+1)+1)) - (x ^ (2*x+1)))").unwrap();
        assert_eq!(e, want);
    }

    #[test]
    fn errors() {
        assert!(splice("g@(x", Some("x")).is_err());
        assert!(splice("g@x", None).is_err());
        assert!(splice("g@ + 1", Some("x")).is_err());
        assert_eq!(splice("x + 1", None).unwrap(), "x + 1");
    }
}
