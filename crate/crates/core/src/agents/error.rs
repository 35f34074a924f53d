use thiserror::Error;

use super::FeedbackSection;
use crate::knowledge::KnowledgeError;
use crate::providers::ProviderError;

/// Raised when model output lacks one or more feedback sections.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("missing or empty feedback section(s): {}", names(.missing))]
pub struct FeedbackParseError {
    pub missing: Vec<FeedbackSection>,
}

fn names(sections: &[FeedbackSection]) -> String {
    sections.iter().map(|s| s.title()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("user input must not be empty")]
    EmptyInput,

    #[error("the conversation has no user turns yet")]
    NoUserTurns,

    #[error(transparent)]
    Provider(ProviderError),

    #[error("retrieval failed: {0}")]
    Retrieval(KnowledgeError),

    #[error(transparent)]
    FeedbackParse(#[from] FeedbackParseError),
}

impl From<ProviderError> for AgentError {
    fn from(err: ProviderError) -> Self {
        AgentError::Provider(err)
    }
}

impl From<KnowledgeError> for AgentError {
    fn from(err: KnowledgeError) -> Self {
        match err {
            KnowledgeError::Provider(p) => AgentError::Provider(p),
            other => AgentError::Retrieval(other),
        }
    }
}
