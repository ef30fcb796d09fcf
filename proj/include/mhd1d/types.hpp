#ifndef MHD1D_TYPES_HPP
#define MHD1D_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mhd1d {

using Scalar = double;
using ArrayX = Eigen::ArrayXd;
// Two-component transverse fields (w, b) stored one row per mesh entry.
using Array2X = Eigen::Array<Scalar, Eigen::Dynamic, 2>;
using Vec2 = Eigen::Vector2d;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// A field dropped below the admissible floor; carries where and when.
struct PositivityBreach : Error {
  std::string field;
  Eigen::Index index;
  Scalar x;
  Scalar time;
  PositivityBreach(std::string field_, Eigen::Index index_, Scalar x_, Scalar time_)
      : Error("positivity breach in " + field_ + " at x=" + std::to_string(x_) +
              ", t=" + std::to_string(time_)),
        field(std::move(field_)), index(index_), x(x_), time(time_) {}
};

struct SolverBreakdown : Error {
  using Error::Error;
};

}  // namespace mhd1d

#endif
