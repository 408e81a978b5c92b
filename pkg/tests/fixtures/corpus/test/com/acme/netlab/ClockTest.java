package com.acme.netlab.tests;

import com.acme.netlab.util.Asserts;
import com.acme.netlab.util.Clock;
import static com.acme.netlab.core.TestSteps.*;

public class ClockTest {

    public void readClock() {
        TestBegin("Read current clock value");
        Asserts.check("nonnegative", Clock.now() >= 0);
        TestEnd();
    }

    public void waitBriefly() {
        TestBegin("Wait briefly between steps");
        new Clock().waitMillis(5);
        TestEnd();
    }
}
