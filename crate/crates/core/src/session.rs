//! Session text: named automaton definitions, one per line, building the
//! compiler registry.
//!
//! Two line forms, comments starting with `#`:
//!
//! ```text
//! NAME = morphism <rules> / <coding>     e.g.  FF = morphism 0->01 1->23 / 1->1
//! name = <formula>                       e.g.  g = FF[i]=@0 & n=i+j+k
//! ```
//!
//! Lines are processed top to bottom, so a formula can use every name defined
//! above it. The default session defines the membership DFAO for F and the
//! four-variable representation predicate used by the counting pipeline.

use crate::logic::{
    compile_text, fixed_point_dfao, CompileError, Morphism, MorphismError, Registry,
};

/// Built-in definitions: FF computes the characteristic function of F (the
/// fixed point of the doubling morphism, coded), and g(i,j,k,n) holds iff
/// i, j, k all lie outside F and sum to n.
pub const DEFAULT_SESSION: &str = "\
# F-membership automaton and the three-summand representation predicate.
FF = morphism 0->01 1->23 2->22 3->44 4->33 / 0->0 1->0 2->0 3->1 4->0
g = FF[i]=@0 & FF[j]=@0 & FF[k]=@0 & n=i+j+k
";

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("session line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("session line {line}: {source}")]
    Morphism { line: usize, source: MorphismError },
    #[error("session line {line}: {source}")]
    Compile { line: usize, source: CompileError },
}

/// Builds a registry from session text.
pub fn build_registry(text: &str) -> Result<Registry, SessionError> {
    let mut registry = Registry::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((name, def)) = content.split_once('=') else {
            return Err(SessionError::Malformed {
                line,
                msg: "expected `name = definition`".into(),
            });
        };
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(SessionError::Malformed {
                line,
                msg: format!("bad definition name `{name}`"),
            });
        }
        let def = def.trim();
        if let Some(rest) = def.strip_prefix("morphism ") {
            let Some((rules, coding)) = rest.split_once('/') else {
                return Err(SessionError::Malformed {
                    line,
                    msg: "morphism definition needs `<rules> / <coding>`".into(),
                });
            };
            let m = Morphism::parse(rules.trim(), coding.trim())
                .map_err(|source| SessionError::Morphism { line, source })?;
            let dfao =
                fixed_point_dfao(&m).map_err(|source| SessionError::Morphism { line, source })?;
            registry.add_dfao(name, dfao);
        } else {
            let compiled = compile_text(def, &registry)
                .map_err(|source| SessionError::Compile { line, source })?;
            registry.add_predicate(name, compiled);
        }
    }
    Ok(registry)
}

/// Registry for the built-in session.
pub fn default_registry() -> Registry {
    build_registry(DEFAULT_SESSION).expect("built-in session is well formed")
}
