//! JSON shift spec files.
//!
//! ```json
//! {"kind":"sft","alphabet":2,"forbidden":["01","11"]}
//! {"kind":"spacing","class":"cofinite","complement":[1,2]}
//! {"kind":"spacing","class":"thick","complement_powers":{"offset":2,"base":10}}
//! {"kind":"spacing","class":"general","members":[0,3,4,5]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{ShiftError, SpecFileError};
use crate::shift::{GapSet, SftSpec, ShiftSpec, SpacingClass, SpacingSpec, DEFAULT_HORIZON};
use crate::witness::WitnessCertificate;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerComplement {
    pub offset: u64,
    pub base: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpecFile {
    Sft {
        alphabet: u8,
        forbidden: Vec<String>,
    },
    Spacing {
        class: SpacingClass,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        complement: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        complement_powers: Option<PowerComplement>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        members: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<u64>,
    },
}

/// A parsed spec together with normalization notes for the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSpec {
    pub spec: ShiftSpec,
    pub warnings: Vec<String>,
}

fn invalid(msg: impl Into<String>) -> SpecFileError {
    SpecFileError::Invalid(ShiftError::InvalidSpec(msg.into()))
}

impl SpecFile {
    pub fn into_spec(self) -> Result<ParsedSpec, SpecFileError> {
        match self {
            SpecFile::Sft { alphabet, forbidden } => {
                let words = forbidden
                    .iter()
                    .map(|w| {
                        w.parse::<Word>()
                            .map_err(|e| invalid(format!("forbidden word {w:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let (sft, removed) = SftSpec::normalized(alphabet, words)?;
                let warnings = if removed.is_empty() {
                    Vec::new()
                } else {
                    let kept: Vec<String> = sft.forbidden().iter().map(Word::to_string).collect();
                    let dropped: Vec<String> = removed.iter().map(Word::to_string).collect();
                    vec![format!(
                        "forbidden set is not minimal: dropped [{}], using [{}]",
                        dropped.join(","),
                        kept.join(",")
                    )]
                };
                Ok(ParsedSpec {
                    spec: ShiftSpec::Sft(sft),
                    warnings,
                })
            }
            SpecFile::Spacing {
                class,
                complement,
                complement_powers,
                members,
                horizon,
            } => {
                let gaps = match (complement, complement_powers, members) {
                    (Some(c), None, None) => GapSet::Cofinite {
                        complement: c.into_iter().collect(),
                    },
                    (None, Some(p), None) => GapSet::PowerComplement {
                        offset: p.offset,
                        base: p.base,
                    },
                    (None, None, Some(m)) => GapSet::Explicit {
                        members: m.into_iter().collect(),
                    },
                    _ => {
                        return Err(invalid(
                            "a spacing spec needs exactly one of complement, complement_powers, members",
                        ))
                    }
                };
                let spec = SpacingSpec::new(gaps, class, horizon.unwrap_or(DEFAULT_HORIZON))?;
                Ok(ParsedSpec {
                    spec: ShiftSpec::Spacing(spec),
                    warnings: Vec::new(),
                })
            }
        }
    }

    pub fn from_spec(spec: &ShiftSpec) -> SpecFile {
        match spec {
            ShiftSpec::Sft(s) => SpecFile::Sft {
                alphabet: s.alphabet(),
                forbidden: s.forbidden().iter().map(Word::to_string).collect(),
            },
            ShiftSpec::Spacing(s) => {
                let (complement, complement_powers, members) = match s.gaps() {
                    GapSet::Cofinite { complement } => (Some(complement.iter().copied().collect()), None, None),
                    GapSet::PowerComplement { offset, base } => (
                        None,
                        Some(PowerComplement {
                            offset: *offset,
                            base: *base,
                        }),
                        None,
                    ),
                    GapSet::Explicit { members } => (None, None, Some(members.iter().copied().collect())),
                };
                SpecFile::Spacing {
                    class: s.class(),
                    complement,
                    complement_powers,
                    members,
                    horizon: Some(s.horizon()),
                }
            }
        }
    }
}

pub fn parse_spec_str(text: &str) -> Result<ParsedSpec, SpecFileError> {
    serde_json::from_str::<SpecFile>(text)?.into_spec()
}

pub fn spec_to_json(spec: &ShiftSpec) -> String {
    serde_json::to_string(&SpecFile::from_spec(spec)).expect("spec files always serialize")
}

/// A certificate bundled with the base shift it refers to, so it can be
/// re-verified standalone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub omega: SpecFile,
    pub certificate: WitnessCertificate,
}

impl CertificateFile {
    pub fn new(omega: &ShiftSpec, certificate: WitnessCertificate) -> Self {
        CertificateFile {
            omega: SpecFile::from_spec(omega),
            certificate,
        }
    }

    pub fn parse(text: &str) -> Result<(ParsedSpec, WitnessCertificate), SpecFileError> {
        let file: CertificateFile = serde_json::from_str(text)?;
        Ok((file.omega.into_spec()?, file.certificate))
    }
}
