#pragma once
#include <stdexcept>
#include <string>

namespace curvgreen {

// Stable error codes; values are part of the C API contract.
enum class errc : int {
    ok = 0,
    singular_metric = 1,
    out_of_chart = 2,
    no_convergence = 3,
    multiple_geodesics = 4,
    conjugate_point = 5,
    stencil_out_of_domain = 6,
    cap_exceeded = 7,
    domain_error = 8,
    truncation_overflow = 9,
    null_separation = 10,
    interpolation_unstable = 11,
    series_missing = 12,
    parse_error = 13,
    validation_error = 14,
    metric_not_found = 15,
    io_error = 16,
    internal = 99,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace curvgreen
