/*
 * Copyright 2026 The fsr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "params.hpp"

namespace fsr::detail {

/// In-place 2D complex DFT of a fixed row-major size, backed by FFTW.
///
/// forward:  X[k,l] = sum x[m,n] exp(-j 2 pi (mk/M + nl/N))
/// backward: x[m,n] = sum X[k,l] exp(+j 2 pi (mk/M + nl/N))   (unnormalized)
class Fft2d {
public:
    Fft2d(int rows, int cols) : rows_(rows), cols_(cols)
    {
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(rows) * cols);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_BACKWARD, flags);
        if (forward_ == nullptr || backward_ == nullptr)
            throw ParameterError("unable to plan FFT");
    }
    ~Fft2d()
    {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    void forward(std::vector<std::complex<double>>& data) const { run(forward_, data); }
    void backward(std::vector<std::complex<double>>& data) const { run(backward_, data); }

    /// Shared plan for the given size. Planning is serialized; execution is thread safe.
    static const Fft2d& get(int rows, int cols)
    {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::unique_ptr<Fft2d>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{rows, cols}];
        if (!slot)
            slot = std::make_unique<Fft2d>(rows, cols);
        return *slot;
    }

private:
    void run(fftw_plan plan, std::vector<std::complex<double>>& data) const
    {
        if (data.size() != static_cast<std::size_t>(rows_) * cols_)
            throw ParameterError("FFT buffer size mismatch");
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan, buf, buf);
    }

    int rows_;
    int cols_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

} // namespace fsr::detail
