#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atmroute {

// Money is whole VND, time is whole minutes from midnight, distance is whole
// meters. Files carry kilometres; conversion happens at the I/O boundary.
using Money = std::int64_t;
using Minutes = std::int32_t;
using Meters = std::int64_t;

// Dense node numbering: depots occupy [0, D), ATMs occupy [D, D + A).
using NodeIndex = int;
using AtmIndex = int;
using DepotIndex = int;
using VehicleIndex = int;
// Zero-based internally; files and reports use 1..p.
using Period = int;

// Raised for malformed input documents. `path` points at the offending field,
// e.g. "atms[3].service_window".
class InputError : public std::runtime_error {
public:
  InputError(std::string path, const std::string& what)
    : std::runtime_error(path.empty() ? what : path + ": " + what),
      path_(std::move(path)) {
  }

  const std::string& path() const noexcept {
    return path_;
  }

private:
  std::string path_;
};

template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T value = T{})
    : rows_(rows), cols_(cols), data_(rows * cols, value) {
  }

  std::size_t rows() const noexcept {
    return rows_;
  }
  std::size_t cols() const noexcept {
    return cols_;
  }

  T& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

inline Meters km_to_meters(double km) {
  return static_cast<Meters>(km * 1000.0 + (km >= 0 ? 0.5 : -0.5));
}

inline double meters_to_km(Meters m) {
  return static_cast<double>(m) / 1000.0;
}

} // namespace atmroute
