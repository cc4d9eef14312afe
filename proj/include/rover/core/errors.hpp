#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rover {

/// Normal-equation system has one or more unobservable directions.
class DegeneracyError : public std::runtime_error {
  public:
    explicit DegeneracyError(const std::string& what, std::vector<std::string> directions = {})
        : std::runtime_error(what), directions_(std::move(directions)) {}

    /// Human-readable names of the unobservable directions, worst first.
    const std::vector<std::string>& directions() const { return directions_; }

  private:
    std::vector<std::string> directions_;
};

/// Requested more backscatter channels than the band can provide.
class ChannelCapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace rover
