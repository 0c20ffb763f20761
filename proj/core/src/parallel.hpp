#pragma once

#ifdef _OPENMP
#define DKPAIR_PARALLEL_FOR _Pragma("omp parallel for schedule(static)")
#else
#define DKPAIR_PARALLEL_FOR
#endif
