#include "frobmod/exactla.hpp"
