#include "fpd/error.hpp"

namespace fpd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Reference: return "Reference";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::PolarRegion: return "PolarRegion";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::DegenerateLeg: return "DegenerateLeg";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::EmptyProcedure: return "EmptyProcedure";
    case ErrorKind::Undefined: return "Undefined";
    case ErrorKind::Backend: return "Backend";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::HttpStatus: return "HttpStatus";
    case ErrorKind::MalformedReply: return "MalformedReply";
    case ErrorKind::ScriptExhausted: return "ScriptExhausted";
    case ErrorKind::Cancelled: return "Cancelled";
  }
  return "Unknown";
}

}  // namespace fpd
