#pragma once

namespace pdcheb::detail {

// Unnormalized DCT-I (FFTW REDFT00) applied in place to `count` vectors of
// `len` samples. Element i of vector v lives at data[v * dist + i * stride].
void dct1_many(double* data, int len, int count, int stride, int dist);

inline void dct1(double* data, int len) { dct1_many(data, len, 1, 1, len); }

}  // namespace pdcheb::detail
