#include "fopkit/error.hpp"

namespace fopkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::InvalidVocabulary: return "InvalidVocabulary";
        case ErrorKind::UnknownVocabulary: return "UnknownVocabulary";
        case ErrorKind::OutOfUniverse: return "OutOfUniverse";
        case ErrorKind::MissingConstant: return "MissingConstant";
        case ErrorKind::VocabularyMismatch: return "VocabularyMismatch";
        case ErrorKind::UnboundVariable: return "UnboundVariable";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NotUniversal: return "NotUniversal";
        case ErrorKind::NotLiteral: return "NotLiteral";
        case ErrorKind::ConstantNotUnique: return "ConstantNotUnique";
        case ErrorKind::NotProjective: return "NotProjective";
        case ErrorKind::UnsupportedFormula: return "UnsupportedFormula";
        case ErrorKind::UnknownProblem: return "UnknownProblem";
        case ErrorKind::NoFreshVertex: return "NoFreshVertex";
        case ErrorKind::PreconditionViolation: return "PreconditionViolation";
        case ErrorKind::ContradictoryWitnessBuilder: return "ContradictoryWitnessBuilder";
    }
    return "Error";
}

}  // namespace fopkit
