#ifndef LOMEM_FFTW_LOCK_HPP
#define LOMEM_FFTW_LOCK_HPP

#include <mutex>

namespace lomem::detail {

// fftw's planner is not re-entrant; execution of a plan is. Every plan
// creation and destruction in the library takes this lock.
std::mutex& fftw_planner_mutex();

}  // namespace lomem::detail

#endif  // LOMEM_FFTW_LOCK_HPP
