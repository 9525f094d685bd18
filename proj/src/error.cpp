#include "detsing/error.hpp"

namespace detsing {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::CharTwoForbidden: return "CharTwoForbidden";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::OddSize: return "OddSize";
    case ErrorCode::NotInCenter: return "NotInCenter";
    case ErrorCode::NonHomogeneousGenerators: return "NonHomogeneousGenerators";
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

}  // namespace detsing
