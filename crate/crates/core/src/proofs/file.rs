//! The textual proof file format.
//!
//! ```text
//! # optional comment
//! @cs axiomatic
//! @nec on
//! 1. p -> p ; A0
//! 2. K(p -> p) ; KNEC 1
//! ```
//!
//! Justifications are `A0`..`A9`, `MP i j`, `KNEC i`, `BOXNEC i`,
//! `JNEC j i`, `CS` and `R4 i`. Directives must precede the first step.

use super::checker::{HilbertProof, Justification, ProofStep};
use super::cs::ConstantSpec;
use super::AxiomGroup;
use crate::syntax::parse_formula;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ProofFileError {
    pub line: usize,
    pub message: String,
}

impl ProofFileError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ProofFileError { line, message: message.into() }
    }
}

impl fmt::Display for ProofFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Parses a proof file into a [`HilbertProof`], honouring `@cs` and
/// `@nec` directives.
pub fn parse_proof_file(text: &str) -> Result<HilbertProof, ProofFileError> {
    let mut steps: Vec<ProofStep> = Vec::new();
    let mut cs = ConstantSpec::axiomatic();
    let mut nec_enabled = true;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(directive) = line.strip_prefix('@') {
            if !steps.is_empty() {
                return Err(ProofFileError::new(
                    lineno,
                    "directives must precede the first proof step",
                ));
            }
            let mut parts = directive.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("cs"), Some(policy), None) => {
                    cs = match policy {
                        "empty" => ConstantSpec::empty(),
                        "axiomatic" => ConstantSpec::axiomatic(),
                        "iterated" => ConstantSpec::iterated(),
                        other => {
                            return Err(ProofFileError::new(
                                lineno,
                                format!("unknown constant specification `{other}` (expected empty, axiomatic or iterated)"),
                            ))
                        }
                    };
                }
                (Some("nec"), Some(switch), None) => {
                    nec_enabled = match switch {
                        "on" => true,
                        "off" => false,
                        other => {
                            return Err(ProofFileError::new(
                                lineno,
                                format!("unknown necessitation switch `{other}` (expected on or off)"),
                            ))
                        }
                    };
                }
                _ => {
                    return Err(ProofFileError::new(
                        lineno,
                        format!("unknown directive `@{directive}`"),
                    ))
                }
            }
            continue;
        }

        let Some((index_part, rest)) = line.split_once('.') else {
            return Err(ProofFileError::new(lineno, "expected `N. <formula> ; <justification>`"));
        };
        let index: usize = index_part.trim().parse().map_err(|_| {
            ProofFileError::new(lineno, format!("invalid step index `{}`", index_part.trim()))
        })?;
        let expected = steps.len() + 1;
        if index != expected {
            return Err(ProofFileError::new(
                lineno,
                format!("expected step index {expected}, found {index}"),
            ));
        }
        let Some((formula_part, just_part)) = rest.rsplit_once(';') else {
            return Err(ProofFileError::new(lineno, "missing `; <justification>`"));
        };
        let formula = parse_formula(formula_part.trim(), None)
            .map_err(|e| ProofFileError::new(lineno, format!("in formula: {e}")))?;
        let justification = parse_justification(just_part.trim())
            .map_err(|msg| ProofFileError::new(lineno, msg))?;
        steps.push(ProofStep { index, formula, justification });
    }

    Ok(HilbertProof { steps, nec_enabled, cs })
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let mut parts = text.split_whitespace();
    let head = parts.next().ok_or("missing justification")?;
    let args: Vec<&str> = parts.collect();
    let index = |s: &str| -> Result<usize, String> {
        s.parse().map_err(|_| format!("invalid step reference `{s}`"))
    };
    match head {
        "MP" => match args.as_slice() {
            [i, j] => Ok(Justification::MP(index(i)?, index(j)?)),
            _ => Err("MP takes two step references".into()),
        },
        "KNEC" => match args.as_slice() {
            [i] => Ok(Justification::KNec(index(i)?)),
            _ => Err("KNEC takes one step reference".into()),
        },
        "BOXNEC" => match args.as_slice() {
            [i] => Ok(Justification::BoxNec(index(i)?)),
            _ => Err("BOXNEC takes one step reference".into()),
        },
        "JNEC" => match args.as_slice() {
            [agent, i] => Ok(Justification::AgentNec(agent.to_string(), index(i)?)),
            _ => Err("JNEC takes an agent and one step reference".into()),
        },
        "CS" => match args.as_slice() {
            [] => Ok(Justification::CS),
            _ => Err("CS takes no arguments".into()),
        },
        "R4" => match args.as_slice() {
            [i] => Ok(Justification::R4(index(i)?)),
            _ => Err("R4 takes one step reference".into()),
        },
        other => match (other.parse::<AxiomGroup>(), args.as_slice()) {
            (Ok(group), []) => Ok(Justification::Axiom(group)),
            (Ok(_), _) => Err("axiom justifications take no arguments".into()),
            (Err(()), _) => Err(format!("unknown justification `{other}`")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check_proof, CheckOutcome};

    #[test]
    fn parses_directives_and_steps() {
        let text = "\
# a comment
@cs empty
@nec off

1. p -> p ; A0
2. p -> p | q ; A0
";
        let proof = parse_proof_file(text).unwrap();
        assert_eq!(proof.steps.len(), 2);
        assert!(!proof.nec_enabled);
        assert_eq!(proof.cs, ConstantSpec::empty());
        assert!(check_proof(&proof).is_accepted());
    }

    #[test]
    fn checks_a_small_file_end_to_end() {
        let text = "\
1. p -> p ; A0
2. K(p -> p) ; KNEC 1
3. c:(K(p -> p) -> K(p -> p)) ; CS
";
        let proof = parse_proof_file(text).unwrap();
        assert_eq!(check_proof(&proof), CheckOutcome::Accepted { steps: 3 });
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_proof_file("1. p - q ; A0").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("in formula"), "{err}");

        let err = parse_proof_file("1. p ; A0\n3. q ; A0").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("expected step index 2"), "{err}");

        let err = parse_proof_file("1. p ; FOO").unwrap_err();
        assert!(err.message.contains("unknown justification"), "{err}");

        let err = parse_proof_file("1. p ; A0\n@cs empty").unwrap_err();
        assert!(err.message.contains("precede"), "{err}");
    }
}
