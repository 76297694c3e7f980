#pragma once

#include "germlab/activity.hpp"
#include "germlab/base.hpp"
#include "germlab/context.hpp"
#include "germlab/contraction.hpp"
#include "germlab/group.hpp"
#include "germlab/hausdorff.hpp"
#include "germlab/level_quotients.hpp"
#include "germlab/machine.hpp"
#include "germlab/report.hpp"
#include "germlab/words.hpp"
