#pragma once

#include <fftw3.h>

#include "cissir/types.hpp"

namespace cissir::detail {

// In-place FFTW transform of fixed size; FFTW_ESTIMATE keeps runs bit-identical.
class Dft {
 public:
  Dft(int n, int sign) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    plan_ = fftw_plan_dft_1d(n, buf_, buf_, sign, FFTW_ESTIMATE);
  }
  ~Dft() {
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  cd* data() { return reinterpret_cast<cd*>(buf_); }
  void run() { fftw_execute(plan_); }
  int size() const { return n_; }

 private:
  int n_;
  fftw_complex* buf_;
  fftw_plan plan_;
};

}  // namespace cissir::detail
