//! Text formats: scheme files (point count followed by a row-major color
//! matrix), Cayley tables, and permutation group files. Tokens are separated
//! by arbitrary whitespace and `#` starts a comment that runs to the end of
//! the line.

use crate::construct::{ConstructError, PermutationGroupSpec};
use crate::scheme::{Scheme, ValidationError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("expected {expected} tokens, found {found}")]
    TokenCountMismatch { expected: usize, found: usize },
    #[error("token {position} is not a non-negative integer: {token:?}")]
    NonIntegerToken { token: String, position: usize },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split_whitespace())
}

fn parse_integers(text: &str) -> Result<Vec<u64>, ParseError> {
    tokens(text)
        .enumerate()
        .map(|(position, token)| {
            token
                .parse::<u64>()
                .map_err(|_| ParseError::NonIntegerToken {
                    token: token.to_string(),
                    position,
                })
        })
        .collect()
}

/// Parses `n` followed by `n²` color labels and validates the result.
pub fn parse_scheme(text: &str) -> Result<Scheme, ParseError> {
    let ints = parse_integers(text)?;
    let &n = ints.first().ok_or(ParseError::TokenCountMismatch {
        expected: 1,
        found: 0,
    })?;
    let n = n as usize;
    let expected = n.saturating_mul(n) + 1;
    if ints.len() != expected {
        return Err(ParseError::TokenCountMismatch {
            expected,
            found: ints.len(),
        });
    }
    let labels: Vec<u32> = ints[1..]
        .iter()
        .enumerate()
        .map(|(position, &v)| {
            u32::try_from(v).map_err(|_| ParseError::NonIntegerToken {
                token: v.to_string(),
                position: position + 1,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Scheme::from_color_matrix(n, &labels)?)
}

/// Renders a scheme in the canonical file format; `parse_scheme` of the
/// output reproduces the scheme exactly.
pub fn write_scheme(x: &Scheme) -> String {
    let n = x.n();
    let mut out = String::new();
    out.push_str(&n.to_string());
    out.push('\n');
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| x.color(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `n` followed by `n²` entries of a Cayley table.
pub fn parse_group_table(text: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    let ints = parse_integers(text)?;
    let &n = ints.first().ok_or(ParseError::TokenCountMismatch {
        expected: 1,
        found: 0,
    })?;
    let n = n as usize;
    let expected = n.saturating_mul(n) + 1;
    if ints.len() != expected {
        return Err(ParseError::TokenCountMismatch {
            expected,
            found: ints.len(),
        });
    }
    Ok((0..n)
        .map(|a| {
            ints[1 + a * n..1 + (a + 1) * n]
                .iter()
                .map(|&v| v as usize)
                .collect()
        })
        .collect())
}

/// Parses a permutation group: `degree generator_count` followed by one
/// image row per generator.
pub fn parse_permutation_group(text: &str) -> Result<PermutationGroupSpec, ParseError> {
    let ints = parse_integers(text)?;
    if ints.len() < 2 {
        return Err(ParseError::TokenCountMismatch {
            expected: 2,
            found: ints.len(),
        });
    }
    let degree = ints[0] as usize;
    let count = ints[1] as usize;
    let expected = 2 + degree * count;
    if ints.len() != expected {
        return Err(ParseError::TokenCountMismatch {
            expected,
            found: ints.len(),
        });
    }
    let generators: Vec<Vec<usize>> = (0..count)
        .map(|g| {
            ints[2 + g * degree..2 + (g + 1) * degree]
                .iter()
                .map(|&v| v as usize)
                .collect()
        })
        .collect();
    Ok(PermutationGroupSpec::new(degree, generators)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::affine_scheme;

    #[test]
    fn single_point() {
        let x = parse_scheme("1\n0").unwrap();
        assert_eq!(x.n(), 1);
        assert_eq!(x.rank(), 1);
    }

    #[test]
    fn trivial_scheme_with_comments() {
        let text = "# the complete graph on three points\n3\n0 1 1  # row 0\n1 0 1\n1 1 0\n";
        let x = parse_scheme(text).unwrap();
        assert_eq!(x.rank(), 2);
    }

    #[test]
    fn roundtrip_preserves_the_scheme() {
        let x = affine_scheme(2, 3).unwrap();
        let y = parse_scheme(&write_scheme(&x)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn token_count_mismatch() {
        assert!(matches!(
            parse_scheme("3\n0 1 1\n1 0 1\n"),
            Err(ParseError::TokenCountMismatch {
                expected: 10,
                found: 7
            })
        ));
    }

    #[test]
    fn non_integer_token() {
        assert!(matches!(
            parse_scheme("2\n0 x\nx 0"),
            Err(ParseError::NonIntegerToken { position: 2, .. })
        ));
    }

    #[test]
    fn permutation_group_file() {
        let spec = parse_permutation_group("5 2\n1 2 3 4 0\n0 2 4 1 3\n").unwrap();
        assert_eq!(spec.degree, 5);
        assert_eq!(spec.generators.len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn parser_never_panics(text in "\\PC*") {
            let _ = parse_scheme(&text);
            let _ = parse_group_table(&text);
            let _ = parse_permutation_group(&text);
        }
    }
}
